"""Photon adding with a binomially distributed number of ancilla photons."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import stats

from .conditional import BeamSplitter, conditional_zero_click, probability_zero_click
from .core.errors import DegenerateStateError, DomainError, ZeroProbabilityError
from .fock import FockVector, MixtureSpec, as_mixture
from .phasespace import quadrature_distribution

logger = logging.getLogger(__name__)

WeightMode = Literal["paper", "posterior"]
WEIGHT_MODES = ("paper", "posterior")
# accepted spelling of "paper"
WEIGHT_ALIASES = {"ancilla": "paper"}


@dataclass(frozen=True)
class BinomialParams:
    N: int
    p: float

    def __post_init__(self) -> None:
        if self.N < 1:
            raise DomainError(f"binomial N must be >= 1, got {self.N}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"binomial p must lie in (0, 1), got {self.p}")

    @property
    def mean(self) -> float:
        return self.N * self.p

    @property
    def variance(self) -> float:
        return self.N * self.p * (1.0 - self.p)

    @property
    def fano(self) -> float:
        return 1.0 - self.p


def binomial_weights(bp: BinomialParams) -> np.ndarray:
    """p~_{n0} = C(N, n0) p^{n0} (1-p)^{N-n0} for n0 = 0..N."""
    return stats.binom.pmf(np.arange(bp.N + 1), bp.N, bp.p)


def normalize_mode(mode: str) -> WeightMode:
    mode = WEIGHT_ALIASES.get(mode, mode)
    if mode not in WEIGHT_MODES:
        raise DomainError(f"weight mode must be 'paper' or 'posterior', got {mode!r}")
    return mode


def mixed_conditional(
    input1: FockVector | MixtureSpec,
    bp: BinomialParams,
    bs: BeamSplitter,
    mode: WeightMode = "paper",
) -> MixtureSpec:
    """Ensemble of zero-click outputs over the ancilla photon number.

    ``paper`` keeps the ancilla weights p~_{n0} (times the signal weights);
    ``posterior`` multiplies each member by its success probability and
    renormalizes.  Members whose conditional state or probability vanishes
    are dropped with a warning.
    """
    mode = normalize_mode(mode)
    source = as_mixture(input1)
    pairs: list[tuple[float, FockVector]] = []
    for n0, w_n0 in enumerate(binomial_weights(bp)):
        for w_sig, member in source.pure_members():
            if w_sig == 0.0 or w_n0 == 0.0:
                continue
            try:
                result = conditional_zero_click(member, n0, bs)
            except DegenerateStateError as exc:
                logger.warning("dropping mixture member n0=%s: %s", n0, exc)
                continue
            if result.probability == 0.0:
                logger.warning("dropping mixture member n0=%s: zero success probability", n0)
                continue
            weight = w_n0 * w_sig
            if mode == "posterior":
                weight *= result.probability
            pairs.append((weight, result.state))
    if not pairs:
        raise ZeroProbabilityError("every mixture member has zero success probability")
    total = math.fsum(w for w, _ in pairs)
    return MixtureSpec(members=tuple((w / total, s) for w, s in pairs))


def mixed_probability(
    diag: Sequence[float] | np.ndarray,
    bp: BinomialParams,
    bs: BeamSplitter,
    mode: WeightMode = "paper",
) -> float:
    """``paper``: sum p~ P(n0).  ``posterior``: sum p~ P(n0)^2 / sum p~ P(n0)."""
    mode = normalize_mode(mode)
    weights = binomial_weights(bp)
    probs = np.array([probability_zero_click(diag, n0, bs) for n0 in range(bp.N + 1)])
    average = math.fsum(weights * probs)
    if mode == "paper":
        return average
    if average == 0.0:
        raise ZeroProbabilityError("mixed success probability vanishes")
    return math.fsum(weights * probs * probs) / average


def mixture_quadrature(mixture: MixtureSpec, phi: float, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape)
    for w, member in mixture.pure_members():
        out = out + w * quadrature_distribution(member.normalized(), phi, xs)
    return out


def mixed_quadrature(
    input1: FockVector | MixtureSpec,
    bp: BinomialParams,
    bs: BeamSplitter,
    phi: float,
    xs: np.ndarray,
    mode: WeightMode = "paper",
) -> np.ndarray:
    return mixture_quadrature(mixed_conditional(input1, bp, bs, mode), phi, xs)


def fringe_visibility(density: np.ndarray) -> float:
    """(max - min) / (max + min) of a density sampled over a fringe window."""
    density = np.asarray(density, dtype=float)
    hi, lo = float(density.max()), float(density.min())
    if hi + lo == 0.0:
        raise DegenerateStateError("density vanishes on the fringe window")
    return (hi - lo) / (hi + lo)
