"""Photon-added squeezed vacuum (a†)^{n0} S(xi')|0> with real kappa'.

Amplitudes::

    <n|Psi> = b_n / sqrt(N''),  b_n = sqrt(n!) / k! (kappa'/2)^k,  n = n0 + 2k

A complex kappa' only rotates every phase-space picture; evaluate the real
|kappa'| functions on ``rotate_grid(grid, angle(kappa'))``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .conditional import BeamSplitter
from .core.config import get_settings
from .core.errors import DomainError
from .fock import FockVector, cutoff_for_weights, fock_state
from .phasespace import PhaseSpaceGrid, wigner_points
from .specfun import erfc_complex, gauss_2f1, hermite

logger = logging.getLogger(__name__)

# cat components are truncated at this relative tail so the reconstructed
# amplitudes agree to ~1e-12
CAT_TAIL_EPS = 1e-24
# largest n0 for which the rational series cross-check of N''(+-) runs
SERIES_CHECK_MAX_N0 = 20


@dataclass(frozen=True)
class PasvParams:
    kappa_prime: float
    n0: int

    def __post_init__(self) -> None:
        if isinstance(self.kappa_prime, complex):
            raise DomainError("kappa' must be real; rotate the grid for complex values")
        if not abs(self.kappa_prime) < 1:
            raise DomainError(f"|kappa'| must be below 1, got {self.kappa_prime}")
        if self.n0 < 0:
            raise DomainError(f"n0 must be nonnegative, got {self.n0}")
        object.__setattr__(self, "kappa_prime", float(self.kappa_prime))

    @classmethod
    def from_input(cls, kappa: complex, bs: BeamSplitter, n0: int) -> PasvParams:
        """kappa' = T^2 kappa; its phase must vanish up to a sign."""
        kp = bs.T**2 * complex(kappa)
        if abs(kp.imag) > 1e-12 * max(abs(kp), 1.0):
            raise DomainError(f"kappa' = {kp} is not real; use rotate_grid for the phase")
        return cls(kappa_prime=kp.real, n0=n0)

    @property
    def lam(self) -> float:
        return (1.0 - self.kappa_prime) / (1.0 + self.kappa_prime)


@dataclass(frozen=True)
class CatDecomposition:
    """|Psi> = A (|Psi+> + |Psi->)."""

    plus: FockVector
    minus: FockVector
    amplitude_A: float
    norm_pm: float
    norm_pm_series: float | None = None

    def reconstruct(self) -> np.ndarray:
        return self.amplitude_A * (self.plus.amps + self.minus.amps)


def _hyper(p: PasvParams) -> float:
    n0 = p.n0
    return gauss_2f1(0.5 * (n0 + 1), 0.5 * (n0 + 2), 1.0, p.kappa_prime**2)


def pasv_norm_double_prime(p: PasvParams) -> float:
    """N''_{n0} = n0! F((n0+1)/2, (n0+2)/2, 1; kappa'^2)."""
    return math.factorial(p.n0) * _hyper(p)


def pasv_norm(p: PasvParams) -> float:
    """N'_{n0} = sqrt(1 - kappa'^2) N''_{n0}."""
    return math.sqrt(1.0 - p.kappa_prime**2) * pasv_norm_double_prime(p)


pasv_norm_prime = pasv_norm


def _log_b2(p: PasvParams, k: np.ndarray) -> np.ndarray:
    # kappa' != 0
    log_half = math.log(0.5 * abs(p.kappa_prime))
    return special.gammaln(p.n0 + 2 * k + 1.0) - 2 * special.gammaln(k + 1.0) + 2 * k * log_half


def pasv_coefficients(p: PasvParams, eps: float | None = None) -> FockVector:
    eps = get_settings().tail_eps if eps is None else eps
    n0 = p.n0
    if p.kappa_prime == 0.0:
        return fock_state(n0)
    k = np.arange((get_settings().hard_cap - n0) // 2 + 1)
    log_w = _log_b2(p, k) - math.log(pasv_norm_double_prime(p))
    kmax, tail = cutoff_for_weights(log_w, eps, "photon-added squeezed vacuum")
    k = k[: kmax + 1]
    sign = np.where(k % 2 == 1, np.sign(p.kappa_prime), 1.0)
    amps = np.zeros(n0 + 2 * kmax + 1, dtype=complex)
    amps[n0::2] = sign * np.exp(0.5 * log_w[: kmax + 1])
    return FockVector(amps, tail_bound=tail)


def pasv_probability(
    kappa: complex,
    bs: BeamSplitter,
    n0: int,
    kappa_prime: float | None = None,
    legacy: bool = False,
) -> float:
    """Success probability of the zero-click event for a squeezed vacuum input.

    Default: |R|^{2 n0} sqrt(1-|kappa|^2) F((n0+1)/2, (n0+2)/2, 1; kappa'^2).
    It is the default because it equals the photon-number sum
    P = |R|^{2 n0} sum_n |T|^{2n} C(n + n0, n0) p(n) of ``probability_zero_click``
    over the squeezed-vacuum distribution.  ``legacy=True`` evaluates the older
    form with F(n0+1, 1/2, 1; .), which differs from that sum for n0 >= 1
    and agrees with it only at n0 = 0.  ``kappa_prime`` overrides |T|^2 |kappa|.
    """
    if n0 < 0:
        raise DomainError(f"n0 must be nonnegative, got {n0}")
    k = abs(complex(kappa))
    if not k < 1:
        raise DomainError(f"|kappa| must be below 1, got {k}")
    kp = bs.t2 * k if kappa_prime is None else float(kappa_prime)
    if legacy:
        series = gauss_2f1(n0 + 1.0, 0.5, 1.0, kp * kp)
    else:
        series = gauss_2f1(0.5 * (n0 + 1), 0.5 * (n0 + 2), 1.0, kp * kp)
    return bs.r2**n0 * math.sqrt(1.0 - k * k) * series


def pasv_photon_dist(p: PasvParams, eps: float | None = None) -> np.ndarray:
    return np.abs(pasv_coefficients(p, eps).amps) ** 2


def pasv_mean_n(p: PasvParams) -> float:
    """<n> = n0 + kappa'^2 (n0+1)(n0+2)/2 F((n0+3)/2, (n0+4)/2, 2; .)/F((n0+1)/2, (n0+2)/2, 1; .)."""
    n0, z = p.n0, p.kappa_prime**2
    if z == 0.0:
        return float(n0)
    upper = gauss_2f1(0.5 * (n0 + 3), 0.5 * (n0 + 4), 2.0, z)
    return n0 + 0.5 * z * (n0 + 1) * (n0 + 2) * upper / _hyper(p)


def pasv_quadrature(x: np.ndarray | float, phi: float, p: PasvParams) -> np.ndarray | float:
    """Homodyne density at phase phi.

    With D = 1 + kappa'^2 + 2 kappa' cos(2 phi)::

        p(x) = 2^{-n0} / (N'' sqrt(pi D^{n0+1})) exp(-(1-kappa'^2) x^2 / D)
               |H_{n0}(sqrt((1 + kappa' e^{2i phi}) / D) x)|^2

    The sign in D follows from the real amplitudes above, so for kappa' > 0
    phi = 0 is the stretched direction, where the density splits into two
    separated peaks, and phi = pi/2 is the squeezed one, where it carries
    fringes.
    """
    n0, kp = p.n0, p.kappa_prime
    x = np.asarray(x, dtype=float)
    delta = 1.0 + kp * kp + 2.0 * kp * math.cos(2.0 * phi)
    scale = np.sqrt((1.0 + kp * np.exp(2j * phi)) / delta)
    h = hermite(n0, scale * x.astype(complex))
    out = (
        2.0**-n0
        / (pasv_norm_double_prime(p) * math.sqrt(math.pi * delta ** (n0 + 1)))
        * np.exp(-(1.0 - kp * kp) * x * x / delta)
        * np.abs(h) ** 2
    )
    return float(out) if out.ndim == 0 else out


def pasv_wigner(x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams) -> np.ndarray:
    """Closed-form Wigner function as a finite sum over k = 0..n0.

    kappa' = 0 is the Fock state |n0> and goes through the generic route;
    negative kappa' is the positive case with x and p exchanged.
    """
    x, p_var = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p_var, dtype=float))
    kp, n0 = params.kappa_prime, params.n0
    if kp == 0.0:
        return wigner_points(fock_state(n0), x, p_var)
    if kp < 0:
        return pasv_wigner(p_var, x, PasvParams(kappa_prime=-kp, n0=n0))
    lam = params.lam
    prefactor = (
        kp**n0
        * math.sqrt(2.0)
        / (math.pi * pasv_norm_double_prime(params) * (2.0 * (1.0 - kp * kp)) ** (n0 + 0.5))
    )
    z = 1j * math.sqrt(lam / kp) * (x + 1j * p_var / lam)
    total = np.zeros(x.shape)
    for k in range(n0 + 1):
        weight = math.comb(n0, k) ** 2 * math.factorial(k) * (-2.0 / kp) ** k
        total = total + weight * np.abs(hermite(n0 - k, z)) ** 2
    return prefactor * np.exp(-lam * x * x - p_var * p_var / lam) * total


def pasv_husimi(x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams) -> np.ndarray:
    """Q = (x^2+p^2)^{n0} / (pi 2^{n0+1} N'') exp(-[(1-kappa')x^2 + (1+kappa')p^2]/2)."""
    x, p_var = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p_var, dtype=float))
    kp, n0 = params.kappa_prime, params.n0
    r2 = x * x + p_var * p_var
    envelope = np.exp(-0.5 * ((1.0 - kp) * x * x + (1.0 + kp) * p_var * p_var))
    return r2**n0 / (math.pi * 2.0 ** (n0 + 1) * pasv_norm_double_prime(params)) * envelope


def rotate_grid(grid: PhaseSpaceGrid, kappa_phase: float) -> tuple[np.ndarray, np.ndarray]:
    """Mesh coordinates at which the real-kappa' functions give the complex-kappa' picture.

    A phase theta of kappa' rotates the state by theta/2 in phase space, so
    each grid point is rotated back by theta/2.
    """
    x, p = grid.mesh()
    half = 0.5 * kappa_phase
    c, s = math.cos(half), math.sin(half)
    return c * x + s * p, -s * x + c * p


def _require_positive(params: PasvParams) -> None:
    if not params.kappa_prime > 0:
        raise DomainError(f"cat components need kappa' > 0, got {params.kappa_prime}")


def _component_log_weights(params: PasvParams, m: np.ndarray) -> np.ndarray:
    # log |b(+-)_{n0+m}|^2
    return (
        special.gammaln(params.n0 + m + 1.0)
        - 2 * special.gammaln(0.5 * m + 1.0)
        + m * math.log(0.5 * params.kappa_prime)
    )


def _component_series_norm(params: PasvParams, m_max: int) -> float:
    """N''(+-) from the Taylor coefficients of F(1/2,1,1;k^2) + (2/pi) k F(1,1,3/2;k^2).

    Coefficients are tracked as rationals (the odd ones carry an extra 2/pi)
    and differentiated n0 times term by term.
    """
    n0, kp = params.n0, params.kappa_prime
    even = Fraction(1)  # (1/2)_j / j!
    odd = Fraction(1)  # j! / (3/2)_j
    terms = []
    for m in range(m_max + 1):
        j = m // 2
        if m % 2 == 0:
            if j > 0:
                even *= Fraction(2 * j - 1, 2 * j)
            coeff = float(even * Fraction(math.factorial(m + n0), math.factorial(m)))
        else:
            if j > 0:
                odd *= Fraction(2 * j, 2 * j + 1)
            coeff = 2.0 / math.pi * float(odd * Fraction(math.factorial(m + n0), math.factorial(m)))
        terms.append(coeff * kp**m)
    return math.fsum(terms)


def cat_components(params: PasvParams, eps: float = CAT_TAIL_EPS) -> CatDecomposition:
    """Split |Psi_{n0}> into the two squeezed-coherent-like components."""
    _require_positive(params)
    n0 = params.n0
    m = np.arange(get_settings().hard_cap - n0 + 1)
    log_w = _component_log_weights(params, m)
    m_max, tail = cutoff_for_weights(log_w, eps, "cat component")
    log_w = log_w[: m_max + 1]
    log_norm = float(special.logsumexp(log_w))
    norm_pm = math.exp(log_norm)
    magnitude = np.exp(0.5 * (log_w - log_norm))
    plus = np.zeros(n0 + m_max + 1, dtype=complex)
    plus[n0:] = magnitude
    minus = plus.copy()
    minus[n0 + 1 :: 2] *= -1.0
    amplitude_A = 0.5 * math.sqrt(norm_pm / pasv_norm_double_prime(params))
    series = None
    if n0 <= SERIES_CHECK_MAX_N0:
        series = _component_series_norm(params, m_max)
        deviation = abs(series - norm_pm) / norm_pm
        if deviation > 1e-10:
            logger.warning("N''(+-) series and direct sum differ: n0=%s rel=%s", n0, deviation)
    return CatDecomposition(
        plus=FockVector(plus, tail_bound=tail),
        minus=FockVector(minus, tail_bound=tail),
        amplitude_A=amplitude_A,
        norm_pm=norm_pm,
        norm_pm_series=series,
    )


def component_norm(params: PasvParams, eps: float = CAT_TAIL_EPS) -> float:
    _require_positive(params)
    m = np.arange(get_settings().hard_cap - params.n0 + 1)
    log_w = _component_log_weights(params, m)
    m_max, _ = cutoff_for_weights(log_w, eps, "cat component")
    return math.exp(float(special.logsumexp(log_w[: m_max + 1])))


def _sign(sign: int) -> int:
    if sign not in (1, -1):
        raise DomainError(f"component sign must be +1 or -1, got {sign}")
    return sign


def erfc_series(z: np.ndarray | complex, terms: int | None = None) -> np.ndarray | complex:
    """Erfc(x + iy) from the exponentially convergent series for erf(x + iy).

    erf(x+iy) = erf(x) + e^{-x^2}/(2 pi x) [1 - cos 2xy + i sin 2xy]
              + (2/pi) e^{-x^2} sum_{n>=1} e^{-n^2/4}/(n^2 + 4x^2) [f_n + i g_n]

    f_n = 2x - 2x cosh(ny) cos(2xy) + n sinh(ny) sin(2xy)
    g_n = 2x cosh(ny) sin(2xy) + n sinh(ny) cos(2xy)

    Used as an independent reference for ``erfc_complex`` and the component
    Husimi function, not as a production Erfc.
    """
    arr = np.asarray(z, dtype=complex)
    x, y = arr.real.ravel(), arr.imag.ravel()
    if terms is None:
        # e^{-n^2/4} cosh(ny) peaks at n = 2|y|
        terms = int(2.0 * np.max(np.abs(y), initial=0.0)) + 30
    n = np.arange(1, terms + 1, dtype=float)[:, None]
    two_xy = 2.0 * x * y
    # (1 - cos 2xy)/x and sin(2xy)/x, finite at x = 0
    head = 2.0 * y * np.sin(x * y) * np.sinc(x * y / np.pi) + 2j * y * np.sinc(two_xy / np.pi)
    gauss = np.exp(-0.25 * n * n)
    ch = 0.5 * (np.exp(n * y - 0.25 * n * n) + np.exp(-n * y - 0.25 * n * n))
    sh = 0.5 * (np.exp(n * y - 0.25 * n * n) - np.exp(-n * y - 0.25 * n * n))
    f = 2.0 * x * gauss - 2.0 * x * ch * np.cos(two_xy) + n * sh * np.sin(two_xy)
    g = 2.0 * x * ch * np.sin(two_xy) + n * sh * np.cos(two_xy)
    tail = np.sum((f + 1j * g) / (n * n + 4.0 * x * x), axis=0)
    erf = special.erf(x) + np.exp(-x * x) * (head / (2.0 * math.pi) + 2.0 / math.pi * tail)
    out = (1.0 - erf).reshape(arr.shape)
    return complex(out) if out.ndim == 0 else out


def _component_husimi(x, p_var, params: PasvParams, sign: int, erfc) -> np.ndarray:
    _require_positive(params)
    sign = _sign(sign)
    x, p_var = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p_var, dtype=float))
    kp, n0 = params.kappa_prime, params.n0
    alpha_bar = (x - 1j * p_var) / math.sqrt(2.0)
    a2 = np.abs(alpha_bar) ** 2
    values = erfc(-sign * math.sqrt(0.5 * kp) * alpha_bar)
    gaussian = np.exp(-a2 + kp * (alpha_bar * alpha_bar).real)
    return a2**n0 * gaussian * np.abs(values) ** 2 / (2.0 * math.pi * component_norm(params))


def component_husimi(
    x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams, sign: int = 1
) -> np.ndarray:
    """Husimi function of |Psi(+-)> through the complex Erfc.

    Q = |a|^{2 n0} e^{-|a|^2} e^{kappa' Re(conj(a)^2)} |Erfc(-+ sqrt(kappa'/2) conj(a))|^2 / (2 pi N''(+-))
    """
    return _component_husimi(x, p_var, params, sign, erfc_complex)


def component_husimi_series(
    x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams, sign: int = 1
) -> np.ndarray:
    """component_husimi with the Erfc taken from ``erfc_series``."""
    return _component_husimi(x, p_var, params, sign, erfc_series)


def component_husimi_asymptotic(
    x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams, sign: int = 1
) -> np.ndarray:
    """Large-n0 form of component_husimi, a single Gaussian at alpha = +-sqrt(n0)::

        Q ~ n0! / (4 pi^2 n0 N''(+-)) exp(-|alpha -+ sqrt(n0)|^2) exp(kappa' Re alpha^2)

    It comes from |alpha|^{2 n0} e^{-|alpha|^2} ~ n0!/(2 pi n0) (sum of two
    Gaussians at +-sqrt(n0)) and Erfc -> 2 or 0 away from the origin.  Both
    steps are leading order only: n0!/(2 pi n0) is smaller than the maximum
    n0^{n0} e^{-n0} by a factor of about sqrt(2 pi n0), and the tilt moves the centre to
    sqrt(n0)/(1 - kappa') instead of sqrt(n0/(1 - kappa')), so the relative
    error does not shrink with n0.  For a form that converges use
    ``component_husimi_laplace``.
    """
    _require_positive(params)
    sign = _sign(sign)
    n0, kp = params.n0, params.kappa_prime
    if n0 < 1:
        raise DomainError("the asymptotic form needs n0 >= 1")
    x, p_var = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p_var, dtype=float))
    alpha = (x + 1j * p_var) / math.sqrt(2.0)
    log_pre = special.gammaln(n0 + 1.0) - math.log(4.0 * math.pi**2 * n0) - math.log(component_norm(params))
    exponent = -np.abs(alpha - sign * math.sqrt(n0)) ** 2 + kp * (alpha * alpha).real
    return np.exp(log_pre + exponent)


def component_husimi_laplace(
    x: np.ndarray | float, p_var: np.ndarray | float, params: PasvParams, sign: int = 1
) -> np.ndarray:
    """Gaussian approximation of component_husimi from a second-order expansion.

    Expands the exact form about its maximum at alpha = +-sqrt(n0 / (1 - kappa')),
    where Erfc -> 2::

        Q ~ 2/(pi N''(+-)) (n0/(1-kappa'))^{n0} e^{-n0}
            exp(-2(1-kappa')(X -+ a)^2 - 2 kappa' Y^2)

    with X + iY = alpha.
    """
    _require_positive(params)
    sign = _sign(sign)
    n0, kp = params.n0, params.kappa_prime
    if n0 < 1:
        raise DomainError("the asymptotic form needs n0 >= 1")
    x, p_var = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p_var, dtype=float))
    big_x = x / math.sqrt(2.0)
    big_y = p_var / math.sqrt(2.0)
    centre = math.sqrt(n0 / (1.0 - kp))
    log_peak = n0 * math.log(n0 / (1.0 - kp)) - n0 - math.log(component_norm(params))
    exponent = -2.0 * (1.0 - kp) * (big_x - sign * centre) ** 2 - 2.0 * kp * big_y**2
    return 2.0 / math.pi * np.exp(log_peak + exponent)
