"""Beam-splitter conditioning.

Closed forms for the zero-click (photon-added) conditional state and for the
general click probability, plus an independent two-mode evolution that
serves as the oracle for them.

Relation between the normalization constant and the success probability for
a pure input |Phi>::

    <m2=0| V† |Phi, n0> = R^{n0} / sqrt(n0!) (a†)^{n0} T^{n̂} |Phi>

so ``probability == |R|^(2 n0) * normalization / n0!`` where
``normalization = || (a†)^{n0} T^{n̂} |Phi> ||^2``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg, special

from .core.config import get_settings
from .core.errors import CutoffExceededError, DegenerateStateError, DomainError, ZeroProbabilityError
from .fock import FockVector, MixtureSpec, apply_creation, attenuate, photon_number_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter, T = cos(theta) e^{i phi_T}, R = sin(theta) e^{i phi_R}."""

    theta: float
    phi_T: float = 0.0
    phi_R: float = 0.0

    @classmethod
    def from_transmittance(cls, t2: float, phi_T: float = 0.0, phi_R: float = 0.0) -> BeamSplitter:
        if not 0.0 <= t2 <= 1.0:
            raise DomainError(f"|T|^2 must lie in [0, 1], got {t2}")
        return cls(theta=math.acos(math.sqrt(t2)), phi_T=phi_T, phi_R=phi_R)

    @property
    def _cos(self) -> float:
        # snap the float residue of cos(pi/2) so full reflection is exact
        c = math.cos(self.theta)
        return 0.0 if abs(c) < 1e-15 else c

    @property
    def T(self) -> complex:
        return self._cos * complex(math.cos(self.phi_T), math.sin(self.phi_T))

    @property
    def R(self) -> complex:
        return math.sin(self.theta) * complex(math.cos(self.phi_R), math.sin(self.phi_R))

    @property
    def t2(self) -> float:
        return self._cos**2

    @property
    def r2(self) -> float:
        return math.sin(self.theta) ** 2


@dataclass(frozen=True)
class ConditionalResult:
    state: FockVector
    probability: float
    normalization: float | None = None


@dataclass(frozen=True)
class TwoModeState:
    """Two-mode state stored by total photon number.

    ``blocks[N][n1]`` is the amplitude of |n1, N - n1>.
    """

    blocks: tuple[np.ndarray, ...]

    @property
    def n_max(self) -> int:
        return len(self.blocks) - 1

    def norm_squared(self) -> float:
        return math.fsum(float(np.sum(np.abs(b) ** 2)) for b in self.blocks)

    def project_mode2(self, m2: int) -> np.ndarray:
        """Unnormalized mode-1 amplitudes after detecting m2 photons in mode 2."""
        if m2 > self.n_max:
            return np.zeros(1, dtype=complex)
        return np.array([self.blocks[n1 + m2][n1] for n1 in range(self.n_max - m2 + 1)], dtype=complex)

    def reduced_mode1_diagonal(self) -> np.ndarray:
        """<n1| Tr_2 rho |n1> of the output."""
        out = np.zeros(self.n_max + 1)
        for block in self.blocks:
            out[: block.size] += np.abs(block) ** 2
        return out


def _check_n0(n0: int) -> None:
    cap = get_settings().max_n0
    if n0 < 0:
        raise DomainError(f"n0 must be nonnegative, got {n0}")
    if n0 > cap:
        raise CutoffExceededError(f"n0={n0} exceeds cap {cap}")


def probability_zero_click(diag: Sequence[float] | np.ndarray, n0: int, bs: BeamSplitter) -> float:
    """P(n0) = |R|^{2 n0} sum_n1 |T|^{2 n1} C(n1 + n0, n0) <n1|rho|n1>."""
    _check_n0(n0)
    diag = np.asarray(diag, dtype=float)
    t2, r2 = bs.t2, bs.r2
    if t2 == 0.0:
        return r2**n0 * float(diag[0])
    n1 = np.arange(diag.size)
    log_terms = n1 * math.log(t2) + special.gammaln(n1 + n0 + 1.0) - special.gammaln(n1 + 1.0) - math.lgamma(n0 + 1.0)
    return r2**n0 * math.fsum(np.exp(log_terms) * diag)


def _click_inner(n1: int, n0: int, m2: int, r2: Fraction) -> Fraction:
    # sum_j (-1)^j |R|^{2(j-mu)} C(m2, j-nu) C(n1+j, j), exact in rationals
    nu = n0 - m2
    mu = max(0, nu)
    total = Fraction(0)
    for j in range(mu, n0 + 1):
        term = math.comb(m2, j - nu) * math.comb(n1 + j, j) * r2 ** (j - mu)
        total += -term if j % 2 else term
    return total


def probability_click(diag: Sequence[float] | np.ndarray, n0: int, m2: int, bs: BeamSplitter) -> float:
    """P(n0, m2): probability of m2 clicks for input rho ⊗ |n0><n0|.

    The j and k sums factorize into a square; that inner sum is evaluated in
    exact rational arithmetic so the alternating binomial terms cannot
    cancel catastrophically.
    """
    _check_n0(n0)
    if m2 < 0:
        raise DomainError(f"m2 must be nonnegative, got {m2}")
    diag = np.asarray(diag, dtype=float)
    t2, r2 = bs.t2, bs.r2
    if t2 == 0.0:
        # full reflection: mode 2 receives the signal photons
        return float(diag[m2]) if m2 < diag.size else 0.0
    nu = n0 - m2
    r2_exact = Fraction(r2)
    prefactor = r2 ** abs(nu)
    start = max(-nu, 0)
    suffix = np.cumsum(diag[::-1])[::-1]
    terms: list[float] = []
    partial = 0.0
    quiet = 0
    for n1 in range(start, diag.size):
        if diag[n1] == 0.0:
            continue
        inner = _click_inner(n1, n0, m2, r2_exact)
        ratio = Fraction(math.factorial(n0) * math.factorial(n1), math.factorial(n1 + nu) * math.factorial(m2))
        term = float(inner * inner * ratio) * prefactor * t2 ** (n1 - m2) * diag[n1]
        terms.append(term)
        partial += term
        quiet = quiet + 1 if term < 1e-16 * partial else 0
        remaining = suffix[n1 + 1] if n1 + 1 < diag.size else 0.0
        if quiet >= 5 and remaining < 1e-16 * partial:
            break
    return math.fsum(terms)


def conditional_zero_click(state: FockVector, n0: int, bs: BeamSplitter) -> ConditionalResult:
    """Photon-added state (a†)^{n0} T^{n̂}|Phi>, normalized, with P(n0)."""
    _check_n0(n0)
    if bs.T == 0 and np.any(state.amps[1:] != 0):
        raise DegenerateStateError("T = 0: the conditional state of a non-vacuum input is undefined")
    unnormalized = apply_creation(attenuate(state, bs.T), n0)
    norm2 = unnormalized.norm_squared()
    if norm2 == 0.0:
        raise DegenerateStateError("conditional state has vanishing norm")
    probability = probability_zero_click(photon_number_distribution(state), n0, bs)
    return ConditionalResult(state=unnormalized.normalized(), probability=probability, normalization=norm2)


def conditional_mixture(source: MixtureSpec, n0: int, bs: BeamSplitter) -> tuple[list[tuple[float, ConditionalResult]], float]:
    """Zero-click output for a mixed signal: members keep their input weights.

    Returns the weighted conditional members and P(n0) computed from the
    mixture's photon-number diagonal.
    """
    members = [(w, conditional_zero_click(s, n0, bs)) for w, s in source.pure_members() if w > 0]
    return members, probability_zero_click(source.photon_number_diagonal(), n0, bs)


def _initial_blocks(state: FockVector, n0: int) -> list[np.ndarray]:
    n_max = state.cutoff + n0
    if n_max > get_settings().hard_cap:
        raise CutoffExceededError(f"two-mode cutoff {n_max} exceeds cap {get_settings().hard_cap}")
    blocks = [np.zeros(n + 1, dtype=complex) for n in range(n_max + 1)]
    for n1, c in enumerate(state.amps):
        blocks[n1 + n0][n1] = c
    return blocks


def _hop(n_total: int) -> np.ndarray:
    """a1† a2 within the block of total photon number n_total."""
    n1 = np.arange(n_total)
    hop = np.zeros((n_total + 1, n_total + 1))
    hop[n1 + 1, n1] = np.sqrt((n1 + 1.0) * (n_total - n1))
    return hop


def two_mode_evolve(state: FockVector, n0: int, bs: BeamSplitter) -> TwoModeState:
    """Apply V† = e^{i(phi_T+phi_R)L3} e^{2i theta L2} e^{i(phi_T-phi_R)L3} to |Phi>|n0>.

    The beam splitter conserves total photon number, so every block is
    evolved exactly and no truncation enters beyond the input's own tail.
    """
    _check_n0(n0)
    out = []
    for n_total, block in enumerate(_initial_blocks(state, n0)):
        if not np.any(block):
            out.append(block)
            continue
        l3 = np.arange(n_total + 1) - 0.5 * n_total
        hop = _hop(n_total)
        # 2i theta L2 = theta (a1† a2 - a2† a1)
        rotation = linalg.expm(bs.theta * (hop - hop.T))
        v = np.exp(1j * (bs.phi_T - bs.phi_R) * l3) * block
        v = rotation @ v
        v = np.exp(1j * (bs.phi_T + bs.phi_R) * l3) * v
        out.append(v)
    return TwoModeState(blocks=tuple(out))


def _nilpotent_exp(generator: np.ndarray, v: np.ndarray) -> np.ndarray:
    result = v.copy()
    term = v.copy()
    for k in range(1, v.size):
        term = generator @ term / k
        if not np.any(term):
            break
        result = result + term
    return result


def factored_evolve(state: FockVector, n0: int, bs: BeamSplitter) -> TwoModeState:
    """Same evolution through V† = T^{n̂1} e^{-R* a2†a1} e^{R a1†a2} T^{-n̂2}."""
    _check_n0(n0)
    T, R = bs.T, bs.R
    if T == 0:
        raise DomainError("factored evolution needs |T| > 0")
    out = []
    for n_total, block in enumerate(_initial_blocks(state, n0)):
        if not np.any(block):
            out.append(block)
            continue
        n1 = np.arange(n_total + 1)
        hop = _hop(n_total)
        v = np.power(T, -(n_total - n1).astype(float)) * block
        v = _nilpotent_exp(R * hop, v)
        v = _nilpotent_exp(-np.conj(R) * hop.T, v)
        v = np.power(T, n1.astype(float)) * v
        out.append(v)
    return TwoModeState(blocks=tuple(out))


def conditional_general(state: FockVector, n0: int, m2: int, bs: BeamSplitter) -> ConditionalResult:
    """Evolve, project mode 2 onto |m2>, normalize."""
    if m2 < 0:
        raise DomainError(f"m2 must be nonnegative, got {m2}")
    projected = FockVector(two_mode_evolve(state, n0, bs).project_mode2(m2))
    probability = projected.norm_squared()
    if probability == 0.0:
        raise ZeroProbabilityError(f"outcome m2={m2} has zero probability")
    return ConditionalResult(state=projected.normalized(), probability=probability)


def click_distribution(diag: Sequence[float] | np.ndarray, n0: int, bs: BeamSplitter, m2_values: Iterable[int]) -> np.ndarray:
    return np.array([probability_click(diag, n0, m2, bs) for m2 in m2_values])
