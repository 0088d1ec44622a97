"""Scalar special functions used by the closed forms.

All functions accept numpy arrays where it is natural (polynomials, Hermite
functions, Erfc) and are pure: no shared state, safe from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .core.config import get_settings
from .core.errors import ConvergenceError, CutoffExceededError, DomainError, NumericError

ArrayLike = Union[float, complex, np.ndarray]

# Largest |z| for which erfc_complex guarantees its accuracy
ERFC_REGION = 30.0
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class SeriesControl:
    """Termination policy for the Gauss series."""

    rel_tol: float = 1e-15
    max_terms: int = 10**6

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_SERIES = SeriesControl()


def laguerre(n: int, x: ArrayLike) -> ArrayLike:
    """L_n(x) by the three-term recurrence."""
    return assoc_laguerre(n, 0, x)


def assoc_laguerre(n: int, k: int, x: ArrayLike) -> ArrayLike:
    """Associated Laguerre polynomial L_n^k(x).

    (m+1) L_{m+1} = (2m+1+k-x) L_m - (m+k) L_{m-1}
    """
    if n < 0 or k < 0:
        raise DomainError(f"laguerre degree and order must be nonnegative, got n={n}, k={k}")
    prev = np.ones_like(x, dtype=float) if isinstance(x, np.ndarray) else 1.0
    if n == 0:
        return prev
    cur = (k + 1) - x
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + k - x) * cur - (m + k) * prev) / (m + 1)
    return cur


def hermite(n: int, z: ArrayLike, cap: int | None = None) -> ArrayLike:
    """Physicists' Hermite polynomial H_n(z) for real or complex z."""
    cap = get_settings().hermite_cap if cap is None else cap
    if n < 0:
        raise DomainError(f"hermite degree must be nonnegative, got {n}")
    if n > cap:
        raise CutoffExceededError(f"hermite degree {n} exceeds cap {cap}")
    prev = np.ones_like(z) if isinstance(z, np.ndarray) else 1.0 + 0.0 * z
    if n == 0:
        return prev
    cur = 2 * z
    for m in range(1, n):
        prev, cur = cur, 2 * z * cur - 2 * m * prev
    return cur


def hermite_functions(nmax: int, x: ArrayLike) -> np.ndarray:
    """Scaled Hermite functions h_0..h_nmax at real x, shape (nmax+1, *x.shape).

    h_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)); the normalized
    recurrence never forms H_n itself, so large n does not overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape, dtype=float)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_function(n: int, x: ArrayLike) -> np.ndarray:
    return hermite_functions(n, x)[n]


def gauss_2f1(a: float, b: float, c: float, z: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Gauss series F(a, b, c; z) for |z| < 1.

    Stops once the current term drops below ``rel_tol`` times the partial sum
    while the term ratio is below one; the terms are then summed with
    ``math.fsum``.
    """
    if not abs(z) < 1:
        raise DomainError(f"gauss_2f1 requires |z| < 1, got z={z}")
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"gauss_2f1 undefined for nonpositive integer c={c}")
    terms = [1.0]
    term = 1.0
    running = 1.0
    k = 0
    while True:
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        term *= ratio
        k += 1
        if term == 0.0:
            break
        terms.append(term)
        running += term
        if abs(term) <= ctl.rel_tol * abs(running) and abs(ratio) < 1:
            break
        if k >= ctl.max_terms:
            raise ConvergenceError(
                f"gauss_2f1({a}, {b}, {c}; {z}) did not converge in {ctl.max_terms} terms"
            )
    return math.fsum(terms)


def erfc_complex(z: ArrayLike) -> ArrayLike:
    """Complementary error function of a complex argument (Faddeeva based)."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > ERFC_REGION):
        raise DomainError(f"erfc_complex accuracy guaranteed only for |z| <= {ERFC_REGION}")
    out = special.erfc(arr)
    return complex(out) if out.ndim == 0 else out


def log_factorial(n: ArrayLike) -> ArrayLike:
    arr = np.asarray(n)
    if np.any(arr < 0) or np.any(arr > 10**6):
        raise DomainError("log_factorial requires 0 <= n <= 1e6")
    out = special.gammaln(arr + 1.0)
    return float(out) if out.ndim == 0 else out


def binomial(n: int, k: int) -> float:
    """C(n, k) as a float; exact whenever the result is below 2**53."""
    if n < 0 or n > 10**6:
        raise DomainError(f"binomial requires 0 <= n <= 1e6, got n={n}")
    if k < 0 or k > n:
        return 0.0
    if float(n).is_integer() and float(k).is_integer():
        exact = math.comb(int(n), int(k))
        if exact < 2**53:
            return float(exact)
    log_value = log_factorial(n) - log_factorial(k) - log_factorial(n - k)
    if log_value > _LOG_FLOAT_MAX:
        raise NumericError(f"binomial({n}, {k}) overflows double precision")
    return math.exp(log_value)
