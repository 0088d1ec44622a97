from __future__ import annotations

import math

import numpy as np
import pytest

from photon_adder.core.errors import DomainError
from photon_adder.fock import coherent_state, fock_state, squeezed_vacuum
from photon_adder.phasespace import (
    PhaseSpaceGrid,
    husimi,
    husimi_points,
    integrate_grid,
    marginals,
    quadrature_distribution,
    smooth_wigner,
    wavefunction,
    wigner,
    wigner_points,
)


def test_grid_layout():
    grid = PhaseSpaceGrid(-1.0, 1.0, -2.0, 2.0, 3, 5)
    x, p = grid.mesh()
    assert x.shape == (3, 5)
    assert x[2, 0] == 1.0 and p[0, 4] == 2.0
    with pytest.raises(DomainError):
        PhaseSpaceGrid(1.0, -1.0, -1.0, 1.0, 5, 5)
    with pytest.raises(DomainError):
        PhaseSpaceGrid.square(1.0, 1)


def test_vacuum_quadrature():
    xs = np.linspace(-3.0, 3.0, 13)
    np.testing.assert_allclose(quadrature_distribution(fock_state(0), 1.1, xs), np.exp(-xs**2) / math.sqrt(math.pi))


def test_wavefunction_phase_rotation():
    xs = np.linspace(-2.0, 2.0, 9)
    psi = wavefunction(fock_state(1), xs, math.pi / 2)
    np.testing.assert_allclose(psi, 1j * wavefunction(fock_state(1), xs))


def test_vacuum_wigner_peak():
    grid = PhaseSpaceGrid.square(3.0, 7)
    w = wigner(fock_state(0), grid)
    x, p = grid.mesh()
    np.testing.assert_allclose(w, np.exp(-x**2 - p**2) / math.pi, atol=1e-10)
    assert w.max() == pytest.approx(1.0 / math.pi)


def test_single_photon_wigner_negative_at_origin():
    assert float(wigner_points(fock_state(1), 0.0, 0.0)) == pytest.approx(-1.0 / math.pi, abs=1e-10)


def test_coherent_wigner_centre():
    beta = 1.0 + 0.5j
    w = wigner_points(coherent_state(beta), np.array([math.sqrt(2.0), 0.0]), np.array([math.sqrt(2.0) * 0.5, 0.0]))
    assert w[0] == pytest.approx(1.0 / math.pi, abs=1e-9)
    assert w[1] == pytest.approx(math.exp(-2.0 * abs(beta) ** 2) / math.pi, abs=1e-9)


def test_points_and_grid_agree():
    s = squeezed_vacuum(0.4)
    grid = PhaseSpaceGrid.square(2.0, 5)
    x, p = grid.mesh()
    np.testing.assert_allclose(wigner(s, grid), wigner_points(s, x, p), atol=1e-12)
    np.testing.assert_allclose(husimi(s, grid), husimi_points(s, x, p), atol=1e-15)


def test_wigner_normalization_and_marginals():
    s = squeezed_vacuum(0.5)
    grid = PhaseSpaceGrid(-8.0, 8.0, -6.0, 6.0, 161, 121)
    w = wigner(s, grid)
    assert integrate_grid(w, grid) == pytest.approx(1.0, abs=1e-8)
    along_x, along_p = marginals(w, grid)
    np.testing.assert_allclose(along_x, quadrature_distribution(s, 0.0, grid.xs), atol=1e-7)
    np.testing.assert_allclose(along_p, quadrature_distribution(s, math.pi / 2, grid.ps), atol=1e-7)


def test_vacuum_husimi():
    grid = PhaseSpaceGrid.square(4.0, 9)
    x, p = grid.mesh()
    np.testing.assert_allclose(husimi(fock_state(0), grid), np.exp(-(x**2 + p**2) / 2) / (2 * math.pi), atol=1e-15)


def test_husimi_is_smoothed_wigner():
    s = fock_state(1)
    grid = PhaseSpaceGrid.square(8.0, 161)
    x, p = grid.mesh()
    smoothed = smooth_wigner(wigner(s, grid), grid)
    inner = (np.abs(x) <= 4.0) & (np.abs(p) <= 4.0)
    np.testing.assert_allclose(smoothed[inner], husimi(s, grid)[inner], atol=1e-6)
