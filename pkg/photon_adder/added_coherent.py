"""Photon-added coherent states (a†)^{n0}|beta'>, beta' = T beta."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .conditional import BeamSplitter
from .core.config import get_settings
from .core.errors import DomainError, NoMaximumError
from .fock import FockVector, cutoff_for_weights, quadrature_moments
from .specfun import assoc_laguerre, hermite, laguerre

# log grid used to bracket the first positive root in pacs_optimal_beta
_ROOT_SCAN = np.logspace(-6, 4, 4001)


@dataclass(frozen=True)
class PacsParams:
    beta_prime: complex
    n0: int

    def __post_init__(self) -> None:
        if self.n0 < 0:
            raise DomainError(f"n0 must be nonnegative, got {self.n0}")
        object.__setattr__(self, "beta_prime", complex(self.beta_prime))

    @classmethod
    def from_input(cls, beta: complex, bs: BeamSplitter, n0: int) -> PacsParams:
        return cls(beta_prime=bs.T * complex(beta), n0=n0)

    @property
    def u(self) -> float:
        """|beta'|^2"""
        return abs(self.beta_prime) ** 2


def pacs_norm(p: PacsParams) -> float:
    """N'_{n0} = n0! L_{n0}(-|beta'|^2)."""
    return math.factorial(p.n0) * laguerre(p.n0, -p.u)


def pacs_coefficients(p: PacsParams, eps: float | None = None) -> FockVector:
    eps = get_settings().tail_eps if eps is None else eps
    n0, u = p.n0, p.u
    if u == 0.0:
        amps = np.zeros(n0 + 1, dtype=complex)
        amps[n0] = 1.0
        return FockVector(amps)
    cap = get_settings().hard_cap
    n = np.arange(cap - n0 + 1)
    log_w = (
        -u
        + n * math.log(u)
        - 2 * special.gammaln(n + 1.0)
        + special.gammaln(n + n0 + 1.0)
        - math.log(pacs_norm(p))
    )
    cutoff, tail = cutoff_for_weights(log_w, eps, "photon-added coherent state")
    n = n[: cutoff + 1]
    amps = np.zeros(cutoff + n0 + 1, dtype=complex)
    amps[n0:] = np.exp(0.5 * log_w[: cutoff + 1]) * np.exp(1j * n * np.angle(p.beta_prime))
    return FockVector(amps, tail_bound=tail)


def pacs_probability(beta: complex, bs: BeamSplitter, n0: int) -> float:
    """|R|^{2 n0} exp(-|R|^2 |beta|^2) L_{n0}(-|T beta|^2)."""
    if n0 < 0:
        raise DomainError(f"n0 must be nonnegative, got {n0}")
    b2 = abs(complex(beta)) ** 2
    return bs.r2**n0 * math.exp(-bs.r2 * b2) * laguerre(n0, -bs.t2 * b2)


def _stationarity(u: np.ndarray | float, t2: float, r2: float, n0: int) -> np.ndarray | float:
    # dP/d|beta|^2 is proportional to |T|^2 L^1_{n0-1}(-u) - |R|^2 L_{n0}(-u)
    return t2 * assoc_laguerre(n0 - 1, 1, -u) - r2 * laguerre(n0, -u)


def pacs_optimal_beta(bs: BeamSplitter, n0: int) -> float:
    """|beta| maximizing pacs_probability at fixed beam splitter and n0.

    Scans |beta'|^2 on a log grid for the first + to - sign change of the
    stationarity function and bisects it to 1e-10.
    """
    if n0 < 1:
        raise NoMaximumError("for n0 = 0 the probability decreases monotonically in |beta|")
    t2, r2 = bs.t2, bs.r2
    if t2 == 0.0:
        raise NoMaximumError("|T| = 0: the probability does not depend on beta")
    values = _stationarity(_ROOT_SCAN, t2, r2, n0)
    crossings = np.nonzero((values[:-1] > 0) & (values[1:] <= 0))[0]
    if crossings.size == 0:
        raise NoMaximumError(f"no positive maximum for |T|^2={t2}, n0={n0}")
    i = int(crossings[0])
    u = optimize.bisect(_stationarity, _ROOT_SCAN[i], _ROOT_SCAN[i + 1], args=(t2, r2, n0), xtol=1e-10, rtol=1e-15)
    return math.sqrt(u / t2)


def pacs_quadrature(x: np.ndarray | float, phi: float, p: PacsParams) -> np.ndarray | float:
    """Homodyne density of the photon-added coherent state at phase phi."""
    n0 = p.n0
    r = abs(p.beta_prime)
    angle = phi + np.angle(p.beta_prime)
    x = np.asarray(x, dtype=float)
    envelope = np.exp(-((x - math.sqrt(2.0) * r * math.cos(angle)) ** 2))
    h = hermite(n0, x - r / math.sqrt(2.0) * np.exp(1j * angle))
    out = 2.0**-n0 / (pacs_norm(p) * math.sqrt(math.pi)) * envelope * np.abs(h) ** 2
    return float(out) if out.ndim == 0 else out


def pacs_mean_photon_number(p: PacsParams) -> float:
    """<a†a> = (n0+1) L_{n0+1}(-u) / L_{n0}(-u) - 1."""
    return (p.n0 + 1) * laguerre(p.n0 + 1, -p.u) / laguerre(p.n0, -p.u) - 1.0


def pacs_variance(phi: float, p: PacsParams) -> float:
    """Quadrature variance from the Fock-space moments of the state."""
    return quadrature_moments(pacs_coefficients(p), phi)[1]


def pacs_variance_paper(phi: float, p: PacsParams, corrected: bool = False) -> float:
    """Closed form of the quadrature variance.

    By default the prefactor uses L_{n0}(-2|beta'|^2); ``corrected=True``
    uses L_{n0}(-|beta'|^2) like every other term, which agrees with the
    moment route.
    """
    n0, u = p.n0, p.u
    angle = phi + np.angle(p.beta_prime)
    L = laguerre(n0, -u)
    L1 = assoc_laguerre(n0, 1, -u)
    L2 = assoc_laguerre(n0, 2, -u)
    Lp = laguerre(n0 + 1, -u)
    denominator = L if corrected else laguerre(n0, -2.0 * u)
    bracket = (
        2 * u * (L2 * L - L1 * L1) * math.cos(2 * angle)
        - 2 * u * L1 * L1
        - L * L
        + 2 * (n0 + 1) * L * Lp
    )
    return bracket / (2.0 * denominator * denominator)
