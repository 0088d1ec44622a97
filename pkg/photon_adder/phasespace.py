"""Quadrature, Wigner and Husimi functions of an arbitrary Fock vector.

Conventions: x̂ = (a + a†)/sqrt(2), p̂ = (a - a†)/(i sqrt(2)), vacuum
variance 1/2, coherent label alpha = (x + i p)/sqrt(2).  The homodyne
density at phase phi is |sum_n c_n e^{i n phi} h_n(x)|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core.errors import DomainError
from .fock import FockVector
from .specfun import hermite_functions

# wavefunction amplitude below which the Wigner integrand is dropped
PSI_FLOOR = 1e-9
_CHUNK = 2048


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.p_min < self.p_max):
            raise DomainError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.np < 2:
            raise DomainError("grid needs at least two points per axis")

    @classmethod
    def square(cls, half_width: float, n: int) -> PhaseSpaceGrid:
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, P), both shaped (nx, np)."""
        return np.meshgrid(self.xs, self.ps, indexing="ij")


def wavefunction(s: FockVector, xs: np.ndarray, phi: float = 0.0) -> np.ndarray:
    """sum_n c_n e^{i n phi} h_n(x)"""
    xs = np.asarray(xs, dtype=float)
    h = hermite_functions(s.cutoff, xs)
    phases = s.amps * np.exp(1j * phi * np.arange(s.cutoff + 1))
    return np.tensordot(phases, h, axes=1)


def quadrature_distribution(s: FockVector, phi: float, xs: np.ndarray) -> np.ndarray:
    return np.abs(wavefunction(s, xs, phi)) ** 2


def _support_radius(s: FockVector) -> float:
    # beyond the turning point sqrt(2N+1) the Hermite functions decay like a Gaussian
    reach = math.sqrt(2.0 * s.cutoff + 1.0) + 12.0
    t = np.linspace(-reach, reach, 16 * int(reach) + 1)
    above = np.nonzero(np.abs(wavefunction(s, t)) >= PSI_FLOOR)[0]
    if above.size == 0:
        return 1.0
    return float(max(abs(t[above[0]]), abs(t[above[-1]]))) + 0.5


def _gauss_legendre(s: FockVector, radius: float, p_extent: float, nodes: int | None) -> tuple[np.ndarray, np.ndarray]:
    if nodes is None:
        # 4N + 64 nodes, raised when the e^{2ipy} phase oscillates faster
        bandwidth = 2.0 * (p_extent + math.sqrt(2.0 * s.cutoff + 2.0))
        nodes = max(4 * s.cutoff + 64, int(math.ceil(2.0 * radius * bandwidth / math.pi)) + 64)
    y, w = np.polynomial.legendre.leggauss(nodes)
    return radius * y, radius * w


def wigner_points(s: FockVector, x: np.ndarray, p: np.ndarray, nodes: int | None = None) -> np.ndarray:
    """W(x, p) = (1/pi) int dy e^{2ipy} psi(x-y) psi*(x+y) at arbitrary points.

    The y integral runs over |y| <= L with L the radius outside which
    |psi| < 1e-9, by Gauss-Legendre quadrature.
    """
    s = s.normalized()
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    shape = x.shape
    xf, pf = x.ravel(), p.ravel()
    radius = _support_radius(s)
    y, w = _gauss_legendre(s, radius, float(np.max(np.abs(pf), initial=0.0)), nodes)
    ux, inverse = np.unique(xf, return_inverse=True)
    left = wavefunction(s, ux[:, None] - y[None, :])
    right = np.conj(wavefunction(s, ux[:, None] + y[None, :]))
    kernel = left * right * w[None, :]
    values = np.empty(xf.size)
    for start in range(0, xf.size, _CHUNK):
        rows = slice(start, start + _CHUNK)
        phase = np.exp(2j * pf[rows, None] * y[None, :])
        values[rows] = np.einsum("ij,ij->i", kernel[inverse[rows]], phase).real
    return (values / math.pi).reshape(shape)


def wigner(s: FockVector, grid: PhaseSpaceGrid, nodes: int | None = None) -> np.ndarray:
    """Wigner function on the grid, shape (nx, np)."""
    s = s.normalized()
    radius = _support_radius(s)
    y, w = _gauss_legendre(s, radius, max(abs(grid.p_min), abs(grid.p_max)), nodes)
    xs, ps = grid.xs, grid.ps
    left = wavefunction(s, xs[:, None] - y[None, :])
    right = np.conj(wavefunction(s, xs[:, None] + y[None, :]))
    kernel = left * right * w[None, :]
    phase = np.exp(2j * y[:, None] * ps[None, :])
    return (kernel @ phase).real / math.pi


def husimi_points(s: FockVector, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Q = |<alpha|s>|^2 / (2 pi); the overlap terms are built in log space."""
    s = s.normalized()
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    alpha_bar = ((x - 1j * p) / math.sqrt(2.0)).ravel()
    n = np.arange(s.cutoff + 1)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_alpha = np.log(alpha_bar)[None, :]
        log_terms = np.where(n == 0, 0.0, n * log_alpha) - 0.5 * special.gammaln(n + 1.0)
    log_terms = log_terms - 0.5 * np.abs(alpha_bar[None, :]) ** 2
    overlap = np.sum(s.amps[:, None] * np.exp(log_terms), axis=0)
    return (np.abs(overlap) ** 2 / (2.0 * math.pi)).reshape(x.shape)


def husimi(s: FockVector, grid: PhaseSpaceGrid) -> np.ndarray:
    x, p = grid.mesh()
    return husimi_points(s, x, p)


def integrate_grid(values: np.ndarray, grid: PhaseSpaceGrid) -> float:
    """Simpson double integral of a (nx, np) array."""
    inner = integrate.simpson(values, x=grid.ps, axis=1)
    return float(integrate.simpson(inner, x=grid.xs))


def marginals(w: np.ndarray, grid: PhaseSpaceGrid) -> tuple[np.ndarray, np.ndarray]:
    """(int W dp as a function of x, int W dx as a function of p)."""
    return integrate.simpson(w, x=grid.ps, axis=1), integrate.simpson(w, x=grid.xs, axis=0)


def smooth_wigner(w: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """Convolve W with the vacuum Wigner function (1/pi) e^{-x^2-p^2}, giving Q."""
    xs, ps = grid.xs, grid.ps
    dx = (grid.x_max - grid.x_min) / (grid.nx - 1)
    dp = (grid.p_max - grid.p_min) / (grid.np - 1)
    kx = np.exp(-((xs[:, None] - xs[None, :]) ** 2)) * dx / math.sqrt(math.pi)
    kp = np.exp(-((ps[:, None] - ps[None, :]) ** 2)) * dp / math.sqrt(math.pi)
    return kx @ w @ kp.T
