from __future__ import annotations

import math

import numpy as np
import pytest

from photon_adder.conditional import (
    BeamSplitter,
    click_distribution,
    conditional_general,
    conditional_mixture,
    conditional_zero_click,
    factored_evolve,
    probability_click,
    probability_zero_click,
    two_mode_evolve,
)
from photon_adder.core.errors import DegenerateStateError, DomainError
from photon_adder.fock import coherent_state, fidelity, fock_state, photon_number_distribution, squeezed_vacuum, thermal_state


@pytest.fixture
def phased() -> BeamSplitter:
    return BeamSplitter.from_transmittance(0.6, 0.3, -0.2)


def test_beam_splitter_amplitudes(phased):
    assert phased.t2 + phased.r2 == pytest.approx(1.0)
    assert abs(phased.T) ** 2 == pytest.approx(0.6)
    assert np.angle(phased.R) == pytest.approx(-0.2)
    with pytest.raises(DomainError):
        BeamSplitter.from_transmittance(1.2)


@pytest.mark.parametrize("n0", [0, 1, 3])
def test_zero_click_matches_two_mode_evolution(phased, n0):
    state = coherent_state(0.9 * np.exp(0.4j))
    closed = conditional_zero_click(state, n0, phased)
    oracle = conditional_general(state, n0, 0, phased)
    assert fidelity(closed.state, oracle.state) == pytest.approx(1.0, abs=1e-10)
    assert closed.probability == pytest.approx(oracle.probability, abs=1e-12)


def test_probability_normalization_relation(bs08):
    n0 = 3
    result = conditional_zero_click(squeezed_vacuum(0.5), n0, bs08)
    assert result.probability == pytest.approx(bs08.r2**n0 * result.normalization / math.factorial(n0), rel=1e-12)


def test_factored_evolution_agrees(phased):
    state = squeezed_vacuum(0.4)
    a = two_mode_evolve(state, 2, phased)
    b = factored_evolve(state, 2, phased)
    for x, y in zip(a.blocks, b.blocks):
        np.testing.assert_allclose(x, y, atol=1e-9)
    assert a.norm_squared() == pytest.approx(state.norm_squared(), abs=1e-12)


def test_click_distribution_sums_to_one(phased):
    diag = photon_number_distribution(coherent_state(1.0))
    probs = click_distribution(diag, 2, phased, range(diag.size + 3))
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-10)
    assert probs[0] == pytest.approx(probability_zero_click(diag, 2, phased), abs=1e-12)


def test_click_probability_vs_projection(phased):
    state = fock_state(2)
    evolved = two_mode_evolve(state, 1, phased)
    for m2 in range(4):
        projected = float(np.sum(np.abs(evolved.project_mode2(m2)) ** 2))
        assert probability_click([0.0, 0.0, 1.0], 1, m2, phased) == pytest.approx(projected, abs=1e-12)


def test_vacuum_input_probability(bs08):
    # vacuum signal: P(n0) = |R|^{2 n0}
    assert probability_zero_click([1.0], 4, bs08) == pytest.approx(0.2**4)


def test_full_reflection():
    bs = BeamSplitter.from_transmittance(0.0)
    assert probability_zero_click([0.25, 0.75], 2, bs) == pytest.approx(0.25)
    assert probability_click([0.25, 0.75], 2, 1, bs) == pytest.approx(0.75)
    with pytest.raises(DegenerateStateError):
        conditional_zero_click(coherent_state(1.0), 1, bs)
    assert conditional_zero_click(fock_state(0), 2, bs).state.amps[2] == pytest.approx(1.0)


def test_full_transmission_adds_nothing():
    bs = BeamSplitter.from_transmittance(1.0)
    assert probability_zero_click([1.0], 0, bs) == 1.0
    assert probability_zero_click([1.0], 2, bs) == 0.0


def test_negative_n0_rejected(bs08):
    with pytest.raises(DomainError):
        probability_zero_click([1.0], -1, bs08)


def test_conditional_mixture_uses_diagonal(bs08):
    mix = thermal_state(0.3)
    members, probability = conditional_mixture(mix, 1, bs08)
    assert math.fsum(w for w, _ in members) == pytest.approx(1.0)
    expected = math.fsum(w * r.probability for w, r in members)
    assert probability == pytest.approx(expected, rel=1e-12)


def test_no_ancilla_photons_reduce_to_attenuation(phased):
    beta = 1.2 * np.exp(0.5j)
    reduced = two_mode_evolve(coherent_state(beta), 0, phased).reduced_mode1_diagonal()
    expected = photon_number_distribution(coherent_state(phased.T * beta))
    m = min(reduced.size, expected.size)
    np.testing.assert_allclose(reduced[:m], expected[:m], atol=1e-12)


def test_reflection_phase_leaves_amplitudes(bs08):
    state = coherent_state(0.7 + 0.2j)
    turned = BeamSplitter.from_transmittance(0.8, 0.0, 1.1)
    a = conditional_zero_click(state, 2, bs08)
    b = conditional_zero_click(state, 2, turned)
    np.testing.assert_allclose(np.abs(a.state.amps), np.abs(b.state.amps), atol=1e-15)
    assert a.probability == b.probability


@pytest.mark.parametrize("phi_t", [0.4, -1.3])
def test_transmission_phase_rotates_output(bs08, phi_t):
    n0 = 2
    state = squeezed_vacuum(0.5 * np.exp(0.3j))
    turned = BeamSplitter.from_transmittance(0.8, phi_t, 0.0)
    base = conditional_zero_click(state, n0, bs08)
    rotated = conditional_zero_click(state, n0, turned)
    m = np.arange(base.state.cutoff + 1)
    np.testing.assert_allclose(rotated.state.amps, np.exp(1j * (m - n0) * phi_t) * base.state.amps, atol=1e-14)
    assert rotated.probability == pytest.approx(base.probability, rel=1e-14)
    oracle = conditional_general(state, n0, 0, turned).state
    assert fidelity(oracle, rotated.state) == pytest.approx(1.0, abs=1e-11)
