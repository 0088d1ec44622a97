"""Truncated single-mode Fock-space states.

A ``FockVector`` stores amplitudes for photon numbers 0..cutoff together with
a bound on the probability mass that was cut away.  Constructors pick the
smallest cutoff whose tail mass is below ``tail_eps`` (settings default
1e-12) and refuse to grow past the hard cap.

Quadrature convention: ``quadrature_moments(s, phi)`` returns the moments of
the homodyne density ``|sum_n c_n e^{i n phi} h_n(x)|^2`` that
``phasespace.quadrature_distribution`` evaluates, i.e. of x̂(0) after the
phase rotation e^{i phi n̂}.  x̂(0) = (a + a†)/sqrt(2), so the vacuum has
variance 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np
from scipy import special, stats

from .core.config import get_settings
from .core.errors import CutoffExceededError, DegenerateStateError, DomainError

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FockVector:
    amps: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("FockVector amplitudes must be a non-empty 1-d array")
        if not np.all(np.isfinite(amps)):
            raise DomainError("FockVector amplitudes must be finite")
        if self.tail_bound < 0:
            raise DomainError(f"tail_bound must be nonnegative, got {self.tail_bound}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1

    def norm_squared(self) -> float:
        return math.fsum(np.abs(self.amps) ** 2)

    def normalized(self) -> FockVector:
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise DegenerateStateError("cannot normalize the zero vector")
        return FockVector(self.amps / math.sqrt(n2), tail_bound=self.tail_bound / n2)

    def padded(self, cutoff: int) -> np.ndarray:
        """Amplitudes zero-padded (or cut) to length cutoff + 1."""
        out = np.zeros(cutoff + 1, dtype=complex)
        m = min(cutoff, self.cutoff) + 1
        out[:m] = self.amps[:m]
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "cutoff": self.cutoff,
            "re": [float(v) for v in self.amps.real],
            "im": [float(v) for v in self.amps.imag],
            "tail_bound": self.tail_bound,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FockVector:
        try:
            re = np.asarray(data["re"], dtype=float)
            im = np.asarray(data.get("im") or np.zeros_like(re), dtype=float)
            cutoff = int(data.get("cutoff", re.size - 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed FockVector object: {exc}") from exc
        if re.shape != im.shape or re.size != cutoff + 1:
            raise DomainError("FockVector object: re/im lengths must equal cutoff + 1")
        return cls(re + 1j * im, tail_bound=float(data.get("tail_bound", 0.0)))


@dataclass(frozen=True)
class MixtureSpec:
    """Weighted pure states, or weighted Fock numbers (diagonal mixture)."""

    members: tuple[tuple[float, FockVector], ...] = field(default=())
    diagonal: tuple[tuple[float, int], ...] = field(default=())

    def __post_init__(self) -> None:
        members = tuple((float(w), s) for w, s in self.members)
        diagonal = tuple((float(w), int(n)) for w, n in self.diagonal)
        if bool(members) == bool(diagonal):
            raise DomainError("MixtureSpec needs exactly one of members or diagonal")
        weights = [w for w, _ in members or diagonal]
        if any(w < 0 for w in weights):
            raise DomainError("mixture weights must be nonnegative")
        if abs(math.fsum(weights) - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"mixture weights sum to {math.fsum(weights)!r}, not 1")
        if any(n < 0 for _, n in diagonal):
            raise DomainError("photon numbers must be nonnegative")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "diagonal", diagonal)

    @classmethod
    def pure(cls, state: FockVector) -> MixtureSpec:
        return cls(members=((1.0, state),))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members or self.diagonal])

    def pure_members(self) -> list[tuple[float, FockVector]]:
        """Members as weighted pure states (Fock states for a diagonal mixture)."""
        if self.members:
            return list(self.members)
        return [(w, fock_state(n)) for w, n in self.diagonal]

    def photon_number_diagonal(self) -> np.ndarray:
        """<n|rho|n> for n = 0..max cutoff."""
        if self.diagonal:
            out = np.zeros(max(n for _, n in self.diagonal) + 1)
            for w, n in self.diagonal:
                out[n] += w
            return out
        cutoff = max(s.cutoff for _, s in self.members)
        out = np.zeros(cutoff + 1)
        for w, s in self.members:
            out += w * np.abs(s.padded(cutoff)) ** 2
        return out


def _cap() -> int:
    return get_settings().hard_cap


def _eps(eps: float | None) -> float:
    eps = get_settings().tail_eps if eps is None else eps
    if not 0 < eps < 1:
        raise DomainError(f"tail epsilon must lie in (0, 1), got {eps}")
    return eps


def cutoff_for_weights(log_weights: np.ndarray, eps: float, what: str) -> tuple[int, float]:
    """Smallest N whose relative tail mass sum_{m>N} w_m / sum w is below eps.

    ``log_weights`` must cover 0..hard cap; returns (N, tail mass).
    """
    finite = np.isfinite(log_weights)
    if not finite.any():
        raise DegenerateStateError(f"{what}: all weights vanish")
    w = np.zeros_like(log_weights)
    w[finite] = np.exp(log_weights[finite] - log_weights[finite].max())
    suffix = np.cumsum(w[::-1])[::-1]
    total = suffix[0]
    if w[-1] / total >= eps * 1e-3:
        raise CutoffExceededError(f"{what}: tail mass not below {eps} within cap {w.size - 1}")
    tail = np.append(suffix[1:], 0.0) / total
    n = int(np.argmax(tail < eps))
    return n, float(tail[n])


def coherent_state(beta: complex, eps: float | None = None) -> FockVector:
    """|beta> truncated where the Poisson tail drops below eps."""
    eps = _eps(eps)
    beta = complex(beta)
    mu = abs(beta) ** 2
    if mu == 0.0:
        return FockVector(np.array([1.0]))
    n = np.arange(_cap() + 1)
    sf = stats.poisson.sf(n, mu)
    below = np.nonzero(sf < eps)[0]
    if below.size == 0:
        raise CutoffExceededError(f"coherent |beta|={abs(beta)} needs a cutoff above {_cap()}")
    cutoff = int(below[0])
    n = n[: cutoff + 1]
    log_mag = n * math.log(abs(beta)) - 0.5 * mu - 0.5 * special.gammaln(n + 1.0)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(beta))
    return FockVector(amps, tail_bound=float(sf[cutoff]))


def squeezed_vacuum(kappa: complex, eps: float | None = None) -> FockVector:
    """S(xi)|0> with kappa = e^{i phi_xi} tanh|xi|; support on even photon numbers."""
    eps = _eps(eps)
    kappa = complex(kappa)
    k2 = abs(kappa) ** 2
    if not k2 < 1:
        raise DomainError(f"squeezed vacuum requires |kappa| < 1, got {abs(kappa)}")
    if k2 == 0.0:
        return FockVector(np.array([1.0]))
    j = np.arange(_cap() // 2 + 1)
    log_w = (
        0.5 * math.log1p(-k2)
        + special.gammaln(2 * j + 1.0)
        - 2 * j * math.log(2.0)
        - 2 * special.gammaln(j + 1.0)
        + j * math.log(k2)
    )
    # successive weight ratios stay below |kappa|^2, so the tail after j is
    # at most w_{j+1} / (1 - |kappa|^2)
    bound = np.exp(log_w[1:]) / (1.0 - k2)
    below = np.nonzero(bound < eps)[0]
    if below.size == 0:
        raise CutoffExceededError(f"squeezed |kappa|={abs(kappa)} needs a cutoff above {_cap()}")
    jmax = int(below[0])
    amps = np.zeros(2 * jmax + 1, dtype=complex)
    jj = j[: jmax + 1]
    amps[::2] = np.exp(0.5 * log_w[: jmax + 1]) * np.exp(1j * jj * np.angle(kappa))
    return FockVector(amps, tail_bound=float(bound[jmax]))


def fock_state(n: int) -> FockVector:
    if n < 0:
        raise DomainError(f"photon number must be nonnegative, got {n}")
    if n > _cap():
        raise CutoffExceededError(f"Fock state |{n}> exceeds cap {_cap()}")
    amps = np.zeros(n + 1, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def custom_state(coeffs: Sequence[complex] | np.ndarray) -> FockVector:
    """Normalized copy of user-supplied Fock coefficients."""
    amps = np.asarray(coeffs, dtype=complex)
    if amps.size - 1 > _cap():
        raise CutoffExceededError(f"custom state cutoff {amps.size - 1} exceeds cap {_cap()}")
    state = FockVector(amps)
    if state.norm_squared() == 0.0:
        raise DegenerateStateError("custom state coefficients are all zero")
    return state.normalized()


def thermal_state(nbar: float, eps: float | None = None) -> MixtureSpec:
    """Thermal state as a diagonal mixture, truncated at tail mass eps."""
    eps = _eps(eps)
    if nbar < 0:
        raise DomainError(f"mean photon number must be nonnegative, got {nbar}")
    if nbar == 0:
        return MixtureSpec(diagonal=((1.0, 0),))
    n = np.arange(_cap() + 1)
    q = nbar / (1.0 + nbar)
    log_w = n * math.log(q) - math.log1p(nbar)
    cutoff, _ = cutoff_for_weights(log_w, eps, "thermal state")
    w = np.exp(log_w[: cutoff + 1])
    w /= math.fsum(w)
    return MixtureSpec(diagonal=tuple((float(wi), int(i)) for i, wi in enumerate(w)))


def apply_creation(s: FockVector, k: int) -> FockVector:
    """(a†)^k |s>, unnormalized; the cutoff grows by k.

    The returned tail bound scales the input bound by the growth factor at
    the first discarded photon number, an estimate rather than a certificate.
    """
    if k < 0:
        raise DomainError(f"number of added photons must be nonnegative, got {k}")
    if k == 0:
        return s
    if s.cutoff + k > _cap():
        raise CutoffExceededError(f"cutoff {s.cutoff} + {k} exceeds cap {_cap()}")
    n = np.arange(s.cutoff + 1)
    factor = np.exp(0.5 * (special.gammaln(n + k + 1.0) - special.gammaln(n + 1.0)))
    amps = np.zeros(s.cutoff + k + 1, dtype=complex)
    amps[k:] = s.amps * factor
    growth = math.exp(special.gammaln(s.cutoff + k + 2.0) - special.gammaln(s.cutoff + 2.0))
    return FockVector(amps, tail_bound=s.tail_bound * growth)


def attenuate(s: FockVector, T: complex) -> FockVector:
    """T^{n̂} |s>, unnormalized."""
    T = complex(T)
    if abs(T) > 1 + 1e-15:
        raise DomainError(f"attenuation requires |T| <= 1, got {abs(T)}")
    n = np.arange(s.cutoff + 1)
    return FockVector(s.amps * np.power(T, n), tail_bound=s.tail_bound * abs(T) ** (2 * (s.cutoff + 1)))


def photon_number_distribution(s: FockVector) -> np.ndarray:
    return np.abs(s.amps) ** 2


def mean_photon_number(s: FockVector) -> float:
    p = photon_number_distribution(s)
    return math.fsum(np.arange(p.size) * p) / math.fsum(p)


def ladder_moments(s: FockVector) -> tuple[complex, complex, float]:
    """(<a>, <a^2>, <a†a>) of the normalized state."""
    c = s.amps
    n = np.arange(c.size)
    norm2 = s.norm_squared()
    a1 = np.sum(np.conj(c[:-1]) * c[1:] * np.sqrt(n[1:])) if c.size > 1 else 0.0
    a2 = np.sum(np.conj(c[:-2]) * c[2:] * np.sqrt(n[2:] * (n[2:] - 1.0))) if c.size > 2 else 0.0
    nbar = math.fsum(n * np.abs(c) ** 2)
    return complex(a1) / norm2, complex(a2) / norm2, nbar / norm2


def quadrature_moments(s: FockVector, phi: float) -> tuple[float, float]:
    """(mean, variance) of the quadrature measured at phase phi."""
    a1, a2, nbar = ladder_moments(s)
    rot = np.exp(1j * phi)
    mean = math.sqrt(2.0) * (rot * a1).real
    second = (rot * rot * a2).real + nbar + 0.5
    return mean, second - mean * mean


def inner_product(a: FockVector, b: FockVector) -> complex:
    m = min(a.cutoff, b.cutoff) + 1
    return complex(np.vdot(a.amps[:m], b.amps[:m]))


def fidelity(a: FockVector, b: FockVector) -> float:
    return abs(inner_product(a, b)) ** 2 / (a.norm_squared() * b.norm_squared())


def as_mixture(source: FockVector | MixtureSpec) -> MixtureSpec:
    return source if isinstance(source, MixtureSpec) else MixtureSpec.pure(source)


def mixture_from_pairs(pairs: Iterable[tuple[float, FockVector]]) -> MixtureSpec:
    return MixtureSpec(members=tuple(pairs))
