"""Formula-vs-oracle verification suite.

Each check compares a closed form against an independent route (two-mode
block evolution, direct Fock sums, generic phase-space evaluation) and
reports the largest deviation.  Informational checks are reported but never
fail the run.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List

import numpy as np
from scipy import integrate

from . import added_coherent as pacs
from . import added_squeezed as pasv
from . import conditional, mixtures, phasespace
from .conditional import BeamSplitter
from .core.errors import VerificationFailed
from .fock import FockVector, coherent_state, fidelity, fock_state, mean_photon_number, photon_number_distribution, squeezed_vacuum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    detail: str = ""
    informational: bool = False


CheckFn = Callable[[], List[CheckResult]]
_CHECKS: list[tuple[str, CheckFn]] = []


def check(group: str) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        _CHECKS.append((group, fn))
        return fn

    return register


def _result(name: str, error: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(error <= tol), max_error=float(error), detail=detail or f"tol {tol:g}")


# Case matrix for the conditional-state checks
def case_inputs() -> list[tuple[str, FockVector]]:
    cases = [(f"coherent |beta|={b}", coherent_state(b * complex(math.cos(0.4), math.sin(0.4)))) for b in (0.5, 1.0, 2.0)]
    cases += [(f"squeezed |kappa|={k}", squeezed_vacuum(k)) for k in (0.3, 0.67)]
    cases += [(f"fock n={n}", fock_state(n)) for n in (0, 1, 2)]
    return cases


CASE_T2 = (0.3, 0.8)
CASE_SPLITTER_PHASES = (0.3, -0.2)


def _splitters() -> list[BeamSplitter]:
    return [BeamSplitter.from_transmittance(t2, *CASE_SPLITTER_PHASES) for t2 in CASE_T2]


@check("conditional")
def check_zero_click_vs_oracle() -> list[CheckResult]:
    worst_fid = 0.0
    worst_prob = 0.0
    for _, state in case_inputs():
        for bs in _splitters():
            for n0 in range(5):
                closed = conditional.conditional_zero_click(state, n0, bs)
                oracle = conditional.conditional_general(state, n0, 0, bs)
                worst_fid = max(worst_fid, 1.0 - fidelity(closed.state, oracle.state))
                worst_prob = max(worst_prob, abs(closed.probability - oracle.probability))
    return [
        _result("zero-click state vs two-mode evolution (1 - fidelity)", worst_fid, 1e-10),
        _result("zero-click probability vs two-mode evolution", worst_prob, 1e-10),
    ]


@check("conditional")
def check_factored_evolution() -> list[CheckResult]:
    worst = 0.0
    for _, state in case_inputs():
        for bs in _splitters():
            for n0 in range(4):
                a = conditional.two_mode_evolve(state, n0, bs)
                b = conditional.factored_evolve(state, n0, bs)
                worst = max(worst, max(float(np.max(np.abs(x - y))) for x, y in zip(a.blocks, b.blocks)))
    return [_result("factored vs exponentiated beam splitter", worst, 1e-9)]


@check("conditional")
def check_click_probabilities() -> list[CheckResult]:
    worst = 0.0
    worst_sum = 0.0
    for _, state in case_inputs():
        diag = photon_number_distribution(state)
        for bs in _splitters():
            for n0 in range(4):
                evolved = conditional.two_mode_evolve(state, n0, bs)
                m2_values = range(evolved.n_max + 1)
                closed = conditional.click_distribution(diag, n0, bs, m2_values)
                oracle = np.array([float(np.sum(np.abs(evolved.project_mode2(m2)) ** 2)) for m2 in m2_values])
                worst = max(worst, float(np.max(np.abs(closed - oracle))))
                worst_sum = max(worst_sum, abs(math.fsum(closed) - 1.0))
    return [
        _result("click probabilities vs projection", worst, 1e-10),
        _result("click probabilities sum to one", worst_sum, 1e-10),
    ]


@check("closed forms")
def check_closed_probabilities() -> list[CheckResult]:
    worst_c = worst_s = 0.0
    for bs in _splitters():
        for n0 in range(5):
            for b in (0.5, 1.0, 2.0):
                diag = photon_number_distribution(coherent_state(b))
                worst_c = max(worst_c, abs(pacs.pacs_probability(b, bs, n0) - conditional.probability_zero_click(diag, n0, bs)))
            for k in (0.3, 0.67):
                diag = photon_number_distribution(squeezed_vacuum(k))
                worst_s = max(worst_s, abs(pasv.pasv_probability(k, bs, n0) - conditional.probability_zero_click(diag, n0, bs)))
    return [
        _result("coherent closed-form probability vs photon-number sum", worst_c, 1e-10),
        _result("squeezed closed-form probability vs photon-number sum", worst_s, 1e-10),
    ]


@check("closed forms")
def check_closed_states() -> list[CheckResult]:
    worst_c = worst_s = 0.0
    for t2 in CASE_T2:
        bs = BeamSplitter.from_transmittance(t2)
        for n0 in range(5):
            for b in (0.5, 1.0, 2.0):
                params = pacs.PacsParams.from_input(b, bs, n0)
                pipeline = conditional.conditional_zero_click(coherent_state(b), n0, bs).state
                worst_c = max(worst_c, 1.0 - fidelity(pacs.pacs_coefficients(params), pipeline))
            for k in (0.3, 0.67):
                params = pasv.PasvParams.from_input(k, bs, n0)
                pipeline = conditional.conditional_zero_click(squeezed_vacuum(k), n0, bs).state
                worst_s = max(worst_s, 1.0 - fidelity(pasv.pasv_coefficients(params), pipeline))
    return [
        _result("photon-added coherent amplitudes vs pipeline (1 - fidelity)", worst_c, 1e-10),
        _result("photon-added squeezed amplitudes vs pipeline (1 - fidelity)", worst_s, 1e-10),
    ]


@check("reference")
def check_reference_probabilities() -> list[CheckResult]:
    bs = BeamSplitter.from_transmittance(0.8)
    return [
        _result("coherent P(1) at |beta|=1, |T|^2=0.8", abs(pacs.pacs_probability(1.0, bs, 1) - 0.2947), 0.005),
        _result("coherent P(4) at |beta|=1, |T|^2=0.8", abs(pacs.pacs_probability(1.0, bs, 4) - 0.0084), 0.0005),
        _result(
            "squeezed P(1), legacy form, kappa'=0.6, |kappa|=0.67",
            abs(pasv.pasv_probability(0.67, bs, 1, kappa_prime=0.6, legacy=True) - 0.23),
            0.01,
        ),
        _result(
            "squeezed P(4), legacy form, kappa'=0.6, |kappa|=0.67",
            abs(pasv.pasv_probability(0.67, bs, 4, kappa_prime=0.6, legacy=True) - 0.0045),
            0.0005,
        ),
    ]


def _simpson(values: np.ndarray, xs: np.ndarray) -> float:
    return float(integrate.simpson(values, x=xs))


@check("distributions")
def check_quadratures() -> list[CheckResult]:
    xs = np.linspace(-10.0, 10.0, 801)
    worst_c = worst_s = worst_norm = 0.0
    for n0 in (1, 4):
        pc = pacs.PacsParams(beta_prime=0.9 * complex(math.cos(0.5), math.sin(0.5)), n0=n0)
        ps = pasv.PasvParams(kappa_prime=0.6, n0=n0)
        cc, cs = pacs.pacs_coefficients(pc), pasv.pasv_coefficients(ps)
        for phi in (0.0, math.pi / 4, math.pi / 2, 2.0):
            closed_c = pacs.pacs_quadrature(xs, phi, pc)
            closed_s = pasv.pasv_quadrature(xs, phi, ps)
            worst_c = max(worst_c, float(np.max(np.abs(closed_c - phasespace.quadrature_distribution(cc, phi, xs)))))
            worst_s = max(worst_s, float(np.max(np.abs(closed_s - phasespace.quadrature_distribution(cs, phi, xs)))))
            worst_norm = max(worst_norm, abs(_simpson(closed_c, xs) - 1.0), abs(_simpson(closed_s, xs) - 1.0))
    return [
        _result("coherent quadrature closed form vs Hermite sum", worst_c, 1e-9),
        _result("squeezed quadrature closed form vs Hermite sum", worst_s, 1e-9),
        _result("quadrature densities integrate to one", worst_norm, 1e-8),
    ]


@check("distributions")
def check_wigner() -> list[CheckResult]:
    params = pasv.PasvParams(kappa_prime=0.6, n0=4)
    grid = phasespace.PhaseSpaceGrid.square(5.0, 41)
    x, p = grid.mesh()
    closed = pasv.pasv_wigner(x, p, params)
    generic = phasespace.wigner(pasv.pasv_coefficients(params), grid)
    wide = phasespace.PhaseSpaceGrid(-16.0, 16.0, -6.0, 6.0, 321, 241)
    wx, wp = wide.mesh()
    w = pasv.pasv_wigner(wx, wp, params)
    along_x, along_p = phasespace.marginals(w, wide)
    marginal_err = max(
        float(np.max(np.abs(along_x - pasv.pasv_quadrature(wide.xs, 0.0, params)))),
        float(np.max(np.abs(along_p - pasv.pasv_quadrature(wide.ps, math.pi / 2, params)))),
    )
    negative = min(float(np.min(pasv.pasv_wigner(x, p, pasv.PasvParams(0.6, n0)))) for n0 in (1, 4))
    return [
        _result("squeezed Wigner closed form vs y-integral", float(np.max(np.abs(closed - generic))), 1e-7),
        _result("squeezed Wigner integrates to one", abs(phasespace.integrate_grid(w, wide) - 1.0), 1e-7),
        _result("Wigner marginals vs quadrature densities", marginal_err, 1e-6),
        CheckResult("squeezed Wigner takes negative values", negative < 0, negative, "min over grid"),
    ]


@check("distributions")
def check_husimi() -> list[CheckResult]:
    params = pasv.PasvParams(kappa_prime=0.6, n0=4)
    grid = phasespace.PhaseSpaceGrid.square(6.0, 31)
    x, p = grid.mesh()
    closed = pasv.pasv_husimi(x, p, params)
    generic = phasespace.husimi(pasv.pasv_coefficients(params), grid)
    wide = phasespace.PhaseSpaceGrid(-16.0, 16.0, -10.0, 10.0, 321, 201)
    wx, wp = wide.mesh()
    mass = phasespace.integrate_grid(pasv.pasv_husimi(wx, wp, params), wide)

    smooth_params = pasv.PasvParams(kappa_prime=0.3, n0=1)
    sgrid = phasespace.PhaseSpaceGrid.square(8.0, 161)
    sx, sp = sgrid.mesh()
    smoothed = phasespace.smooth_wigner(pasv.pasv_wigner(sx, sp, smooth_params), sgrid)
    inner = (np.abs(sx) <= 4.0) & (np.abs(sp) <= 4.0)
    smooth_err = float(np.max(np.abs(smoothed - pasv.pasv_husimi(sx, sp, smooth_params))[inner]))
    return [
        _result("squeezed Husimi closed form vs overlap sum", float(np.max(np.abs(closed - generic))), 1e-9),
        _result("squeezed Husimi integrates to one", abs(mass - 1.0), 1e-7),
        _result("Husimi equals Gaussian-smoothed Wigner", smooth_err, 1e-5),
        CheckResult("squeezed Husimi is nonnegative", bool(np.min(closed) >= 0), float(np.min(closed))),
    ]


@check("structure")
def check_squeezed_structure() -> list[CheckResult]:
    parity_ok = True
    worst_mean = 0.0
    for n0 in range(7):
        params = pasv.PasvParams(kappa_prime=0.6, n0=n0)
        dist = pasv.pasv_photon_dist(params, eps=1e-16)
        n = np.arange(dist.size)
        parity_ok &= bool(np.all(dist[(n - n0) % 2 == 1] == 0.0) and np.all(dist[:n0] == 0.0))
        direct = mean_photon_number(pasv.pasv_coefficients(params, eps=1e-16))
        worst_mean = max(worst_mean, abs(pasv.pasv_mean_n(params) - direct))
    return [
        CheckResult("squeezed photon-number parity and support", parity_ok, 0.0),
        _result("closed-form mean photon number vs direct sum", worst_mean, 1e-8),
    ]


@check("cat")
def check_cat_components() -> list[CheckResult]:
    worst_rec = worst_series = 0.0
    symmetric = True
    for n0 in (1, 4, 15):
        params = pasv.PasvParams(kappa_prime=0.6, n0=n0)
        cat = pasv.cat_components(params)
        target = pasv.pasv_coefficients(params, eps=pasv.CAT_TAIL_EPS)
        size = max(cat.plus.cutoff, target.cutoff)
        rebuilt = cat.amplitude_A * (cat.plus.padded(size) + cat.minus.padded(size))
        worst_rec = max(worst_rec, float(np.linalg.norm(rebuilt - target.padded(size))))
        symmetric &= bool(np.array_equal(np.abs(cat.plus.amps), np.abs(cat.minus.amps)))
        if n0 <= 10 and cat.norm_pm_series is not None:
            worst_series = max(worst_series, abs(cat.norm_pm_series - cat.norm_pm) / cat.norm_pm)
    return [
        _result("cat reconstruction residual", worst_rec, 1e-10),
        CheckResult("N''(+) equals N''(-)", symmetric, 0.0),
        _result("N''(+-) hypergeometric series vs direct sum (relative)", worst_series, 1e-10),
    ]


@check("cat")
def check_component_husimi() -> list[CheckResult]:
    params = pasv.PasvParams(kappa_prime=0.6, n0=4)
    grid = phasespace.PhaseSpaceGrid.square(5.0, 21)
    x, p = grid.mesh()
    cat = pasv.cat_components(params)
    worst = 0.0
    for sign, member in ((1, cat.plus), (-1, cat.minus)):
        generic = phasespace.husimi(member, grid)
        worst = max(worst, float(np.max(np.abs(pasv.component_husimi(x, p, params, sign) - generic))))
    exact = pasv.component_husimi(x, p, params, 1)
    series = float(np.max(np.abs(pasv.component_husimi_series(x, p, params, 1) - exact)) / np.max(exact))
    return [
        _result("component Husimi (Erfc form) vs overlap sum", worst, 1e-9),
        _result("component Husimi, series Erfc vs complex Erfc (relative)", series, 1e-9),
    ]


def asymptotic_errors(
    kappa_prime: float = 0.3,
    n0_values: Iterable[int] = (5, 10, 20, 40),
    approximation: Callable[..., np.ndarray] = pasv.component_husimi_asymptotic,
) -> list[float]:
    """Relative max error of a large-n0 form where Q exceeds 1% of its peak."""
    grid = phasespace.PhaseSpaceGrid(-4.0, 16.0, -6.0, 6.0, 201, 121)
    x, p = grid.mesh()
    errors = []
    for n0 in n0_values:
        params = pasv.PasvParams(kappa_prime=kappa_prime, n0=n0)
        exact = pasv.component_husimi(x, p, params, 1)
        approx = approximation(x, p, params, 1)
        region = exact > 0.01 * exact.max()
        errors.append(float(np.max(np.abs(exact - approx)[region]) / exact.max()))
    return errors


def _decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def component_wigner_minimum(kappa_prime: float = 0.6, n0: int = 15) -> float:
    params = pasv.PasvParams(kappa_prime=kappa_prime, n0=n0)
    plus = pasv.cat_components(params, eps=1e-16).plus.normalized()
    grid = phasespace.PhaseSpaceGrid(-4.0, 14.0, -5.0, 5.0, 145, 81)
    return float(np.min(phasespace.wigner(plus, grid)))


@check("cat")
def check_component_asymptotics() -> list[CheckResult]:
    leading = asymptotic_errors()
    laplace = asymptotic_errors(approximation=pasv.component_husimi_laplace)
    w_min = component_wigner_minimum()
    return [
        CheckResult(
            "leading-order large-n0 form error decreases with n0",
            _decreasing(leading),
            leading[-1],
            ", ".join(f"{e:.3g}" for e in leading),
            informational=True,
        ),
        CheckResult("second-order Gaussian form error decreases with n0", _decreasing(laplace), laplace[-1], ", ".join(f"{e:.3g}" for e in laplace)),
        CheckResult("component Wigner minimum of order -1e-4", -1e-3 <= w_min <= -1e-5, w_min),
    ]


@check("mixtures")
def check_mixtures() -> list[CheckResult]:
    bp = mixtures.BinomialParams(N=5, p=0.8)
    weights = mixtures.binomial_weights(bp)
    n = np.arange(bp.N + 1)
    mean = math.fsum(n * weights)
    var = math.fsum(n * n * weights) - mean * mean
    bs = BeamSplitter.from_transmittance(0.8)
    xs = np.linspace(-1.5, 1.5, 301)
    pure = pasv.pasv_quadrature(xs, math.pi / 2, pasv.PasvParams(kappa_prime=0.6, n0=4))
    mixed = mixtures.mixed_quadrature(squeezed_vacuum(0.67), bp, bs, math.pi / 2, xs)
    v_pure, v_mixed = mixtures.fringe_visibility(pure), mixtures.fringe_visibility(mixed)
    return [
        _result("binomial mean 4", abs(mean - 4.0), 1e-12),
        _result("binomial variance 0.8", abs(var - 0.8), 1e-12),
        CheckResult("mixing smears fringes", v_mixed < v_pure, v_pure - v_mixed, f"pure {v_pure:.6f}, mixed {v_mixed:.6f}"),
    ]


REFERENCE_MIXED = {"coherent": 0.0007, "squeezed": 0.0004}
REFERENCE_WINDOW = 0.0002


def mixed_reference_readings() -> dict[str, dict[str, float]]:
    bp = mixtures.BinomialParams(N=5, p=0.8)
    bs = BeamSplitter.from_transmittance(0.8)
    diags = {
        "coherent": photon_number_distribution(coherent_state(1.0)),
        "squeezed": photon_number_distribution(squeezed_vacuum(0.67)),
    }
    return {
        family: {mode: mixtures.mixed_probability(diag, bp, bs, mode) for mode in mixtures.WEIGHT_MODES}
        for family, diag in diags.items()
    }


@check("mixtures")
def check_mixed_reference() -> list[CheckResult]:
    out = []
    for family, readings in mixed_reference_readings().items():
        target = REFERENCE_MIXED[family]
        for mode, value in readings.items():
            matches = abs(value - target) <= REFERENCE_WINDOW
            if not matches:
                logger.warning("%s mixed probability (%s weights) %.6g does not match reference value %.4g", family, mode, value, target)
            out.append(
                CheckResult(
                    f"{family} mixed probability, {mode} weights, vs reference {target:.2%}",
                    matches,
                    abs(value - target),
                    f"value {value:.6g}",
                    informational=True,
                )
            )
    return out


def run_checks(groups: Iterable[str] | None = None) -> list[CheckResult]:
    wanted = None if groups is None else set(groups)
    results: list[CheckResult] = []
    for group, fn in _CHECKS:
        if wanted is not None and group not in wanted:
            continue
        logger.info("running %s", fn.__name__)
        results.extend(fn())
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "INFO" if r.informational else ("PASS" if r.passed else "FAIL")
        lines.append(f"{status:4}  {r.name}: max error {r.max_error:.3e} ({r.detail})")
    failed = sum(1 for r in results if not r.passed and not r.informational)
    lines.append(f"{len(results) - failed} of {len(results)} checks passed or informational, {failed} failed")
    return "\n".join(lines) + "\n"


def verify(groups: Iterable[str] | None = None) -> list[CheckResult]:
    """Run the suite; raise VerificationFailed if any non-informational check fails."""
    results = run_checks(groups)
    failures = [r.name for r in results if not r.passed and not r.informational]
    if failures:
        raise VerificationFailed("; ".join(failures), results)
    return results
