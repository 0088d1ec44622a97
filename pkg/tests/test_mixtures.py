from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from photon_adder.added_squeezed import PasvParams, pasv_quadrature
from photon_adder.conditional import BeamSplitter, conditional_zero_click, probability_zero_click
from photon_adder.core.errors import DegenerateStateError, DomainError, ZeroProbabilityError
from photon_adder.fock import coherent_state, fock_state, photon_number_distribution, squeezed_vacuum, thermal_state
from photon_adder.mixtures import (
    BinomialParams,
    binomial_weights,
    fringe_visibility,
    mixed_conditional,
    mixed_probability,
    mixed_quadrature,
    mixture_quadrature,
)
from photon_adder.phasespace import quadrature_distribution


def test_binomial_moments():
    bp = BinomialParams(N=5, p=0.8)
    w = binomial_weights(bp)
    n = np.arange(6)
    assert math.fsum(w) == pytest.approx(1.0, abs=1e-15)
    assert math.fsum(n * w) == pytest.approx(4.0, abs=1e-12)
    assert math.fsum(n * n * w) - 16.0 == pytest.approx(0.8, abs=1e-12)
    assert (bp.mean, bp.variance, bp.fano) == pytest.approx((4.0, 0.8, 0.2))


def test_binomial_poisson_limit():
    w = binomial_weights(BinomialParams(N=2000, p=0.002))
    poisson = stats.poisson.pmf(np.arange(w.size), 4.0)
    assert 0.5 * np.sum(np.abs(w - poisson)) < 0.01


def test_binomial_validation():
    with pytest.raises(DomainError):
        BinomialParams(N=0, p=0.5)
    with pytest.raises(DomainError):
        BinomialParams(N=3, p=1.0)


def test_single_trial_probability(bs08):
    diag = photon_number_distribution(coherent_state(1.0))
    bp = BinomialParams(N=1, p=0.3)
    p0, p1 = (probability_zero_click(diag, n0, bs08) for n0 in (0, 1))
    assert mixed_probability(diag, bp, bs08) == pytest.approx(0.7 * p0 + 0.3 * p1, rel=1e-14)
    posterior = (0.7 * p0**2 + 0.3 * p1**2) / (0.7 * p0 + 0.3 * p1)
    assert mixed_probability(diag, bp, bs08, "posterior") == pytest.approx(posterior, rel=1e-14)


def test_weight_mode_validation(bs08):
    with pytest.raises(DomainError):
        mixed_probability([1.0], BinomialParams(N=2, p=0.5), bs08, "bogus")


def test_conditional_members_and_weights(bs08):
    bp = BinomialParams(N=3, p=0.5)
    source = squeezed_vacuum(0.67)
    mix = mixed_conditional(source, bp, bs08)
    np.testing.assert_allclose(mix.weights, binomial_weights(bp), rtol=1e-14)
    posterior = mixed_conditional(source, bp, bs08, "posterior")
    probs = np.array([conditional_zero_click(source, n0, bs08).probability for n0 in range(4)])
    expected = binomial_weights(bp) * probs
    np.testing.assert_allclose(posterior.weights, expected / expected.sum(), rtol=1e-12)


def test_mixed_quadrature_is_convex_combination(bs08):
    bp = BinomialParams(N=2, p=0.4)
    xs = np.linspace(-5.0, 5.0, 101)
    source = coherent_state(0.8)
    mixed = mixed_quadrature(source, bp, bs08, 0.4, xs)
    expected = sum(
        w * quadrature_distribution(conditional_zero_click(source, n0, bs08).state, 0.4, xs)
        for n0, w in enumerate(binomial_weights(bp))
    )
    np.testing.assert_allclose(mixed, expected, atol=1e-13)


def test_thermal_signal():
    bs = BeamSplitter.from_transmittance(0.5)
    mix = mixed_conditional(thermal_state(0.2), BinomialParams(N=2, p=0.5), bs)
    assert math.fsum(mix.weights) == pytest.approx(1.0)
    density = mixture_quadrature(mix, 0.0, np.linspace(-8.0, 8.0, 801))
    assert np.all(density >= 0)


def test_mixing_smears_fringes(bs08):
    xs = np.linspace(-1.5, 1.5, 301)
    pure = pasv_quadrature(xs, math.pi / 2, PasvParams(kappa_prime=0.6, n0=4))
    mixed = mixed_quadrature(squeezed_vacuum(0.67), BinomialParams(N=5, p=0.8), bs08, math.pi / 2, xs)
    assert fringe_visibility(mixed) < fringe_visibility(pure)


def test_fringe_visibility():
    assert fringe_visibility(np.array([1.0, 3.0, 2.0])) == pytest.approx(0.5)
    with pytest.raises(DegenerateStateError):
        fringe_visibility(np.zeros(4))


def test_all_members_dropped():
    bs = BeamSplitter.from_transmittance(0.0)
    with pytest.raises(ZeroProbabilityError):
        mixed_conditional(fock_state(2), BinomialParams(N=2, p=0.5), bs)


def test_ancilla_is_an_alias_of_paper_weights(bs08):
    bp = BinomialParams(N=3, p=0.6)
    diag = np.abs(coherent_state(1.0).amps) ** 2
    assert mixed_probability(diag, bp, bs08, "ancilla") == mixed_probability(diag, bp, bs08, "paper")


def test_posterior_weights_favour_likely_members(bs08):
    bp = BinomialParams(N=5, p=0.8)
    source = coherent_state(1.0)
    paper = mixed_conditional(source, bp, bs08, "paper")
    posterior = mixed_conditional(source, bp, bs08, "posterior")
    probs = np.array([conditional_zero_click(source, n0, bs08).probability for n0 in range(bp.N + 1)])
    gain = posterior.weights / paper.weights
    # reweighting is proportional to P(n0), so the gain follows the same order
    np.testing.assert_allclose(gain / probs, gain[0] / probs[0], rtol=1e-10)
    order = np.argsort(probs)
    assert np.all(np.diff(gain[order]) > 0)
    assert posterior.weights[np.argmax(probs)] > paper.weights[np.argmax(probs)]
    assert posterior.weights[np.argmin(probs)] < paper.weights[np.argmin(probs)]
