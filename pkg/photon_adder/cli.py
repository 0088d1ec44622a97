"""``photon-adder`` command line: emits the data behind each figure and runs the verification suite.

Exit codes: 0 ok, 1 configuration error, 2 numeric failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import tomllib
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from . import added_coherent as pacs
from . import added_squeezed as pasv
from . import phasespace, verify
from .conditional import BeamSplitter, conditional_mixture, conditional_zero_click
from .core.config import get_settings
from .core.errors import ConfigError, PhotonAdderError, VerificationFailed
from .fock import FockVector, MixtureSpec, mixture_from_pairs
from .inputs import InputSpec, parse_input
from .io import emit, format_csv, format_json, grid_columns, table_document
from .mixtures import WEIGHT_ALIASES, WEIGHT_MODES, BinomialParams, mixed_conditional, mixed_probability, mixture_quadrature

logger = logging.getLogger(__name__)

COMMANDS = ("probability", "quadrature", "photon-dist", "wigner", "husimi", "cat", "mixed", "verify")
PI = repr(math.pi)

# reference figure parameters; kappa_prime is dropped as soon as the user picks an input
COMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "probability": {"input": "coherent:beta=1.0", "n0": [0, 1, 2, 3, 4]},
    "quadrature": {"input": "coherent:beta=1.0", "n0": [1, 4], "phi": f"0:{PI}:33"},
    "photon-dist": {"input": "squeezed:kappa=0.67", "kappa_prime": 0.6, "n0": [1, 4]},
    "wigner": {"input": "squeezed:kappa=0.67", "kappa_prime": 0.6, "n0": [1, 4], "grid": "x=-8:8:161,p=-5:5:101"},
    "husimi": {"input": "squeezed:kappa=0.67", "kappa_prime": 0.6, "n0": [1, 4], "grid": "x=-8:8:161,p=-5:5:101"},
    "cat": {"input": "squeezed:kappa=0.67", "kappa_prime": 0.6, "n0": [15], "grid": "x=-4:14:145,p=-5:5:81"},
    "mixed": {"input": "coherent:beta=1.0", "binomial": "N=5,p=0.8", "phi": f"0:{PI}:33"},
    "verify": {},
}
SWEEP_DEFAULTS = {"coherent": "0:5:101", "squeezed": "0:0.95:96"}


class RunConfig(BaseModel):
    command: Literal["probability", "quadrature", "photon-dist", "wigner", "husimi", "cat", "mixed", "verify"]
    input: str = "coherent:beta=1.0"
    t2: float = Field(default=0.8, ge=0.0, le=1.0)
    phi_t: float = 0.0
    phi_r: float = 0.0
    n0: List[int] = Field(default_factory=lambda: [1])
    binomial: Optional[str] = None
    grid: str = "x=-6:6:121,p=-6:6:121"
    phi: str = "0"
    xs: str = "-6:6:241"
    sweep: Optional[str] = None
    kappa_prime: Optional[float] = Field(default=None, gt=-1.0, lt=1.0)
    out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    weights: Literal["paper", "posterior"] = "paper"
    legacy: bool = False
    groups: Optional[List[str]] = None

    @field_validator("weights", mode="before")
    @classmethod
    def _weight_alias(cls, value: Any) -> Any:
        return WEIGHT_ALIASES.get(value, value) if isinstance(value, str) else value

    def splitter(self) -> BeamSplitter:
        return BeamSplitter.from_transmittance(self.t2, self.phi_t, self.phi_r)

    def source(self) -> InputSpec:
        return parse_input(self.input)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _flag_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="TOML file with the same keys as the flags")
    common.add_argument("--input", help="coherent:beta=1.0 | squeezed:kappa=0.67 | fock:n=2 | thermal:nbar=0.5 | custom:file=state.json")
    common.add_argument("--t2", type=float, help="beam splitter transmittance |T|^2")
    common.add_argument("--phi-t", dest="phi_t", type=float)
    common.add_argument("--phi-r", dest="phi_r", type=float)
    common.add_argument("--n0", type=int, nargs="+", help="numbers of added photons")
    common.add_argument("--binomial", help="N=5,p=0.8")
    common.add_argument("--grid", help="x=a:b:n,p=a:b:n")
    common.add_argument("--phi", help="phase or range a:b:n")
    common.add_argument("--xs", help="quadrature values a:b:n")
    common.add_argument("--sweep", help="|beta| or |kappa| range a:b:n for probability")
    common.add_argument("--kappa-prime", dest="kappa_prime", type=float)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--weights", choices=[*WEIGHT_MODES, *WEIGHT_ALIASES])
    common.add_argument("--legacy", action="store_const", const=True, default=None,
                        help="use the legacy F(n0+1, 1/2, 1) squeezed-vacuum probability form")
    common.add_argument("--groups", nargs="+", help="verification groups to run")

    parser = _Parser(prog="photon-adder", description="Photon-added state simulations")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read_toml(path: str, command: str) -> Dict[str, Any]:
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    flat = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    section = data.get(command, {})
    if isinstance(section, dict):
        flat.update({k.replace("-", "_"): v for k, v in section.items()})
    return flat


def load_config(argv: Sequence[str] | None = None) -> RunConfig:
    """Reference defaults, then the TOML file, then flags."""
    ns = vars(_flag_parser().parse_args(argv))
    command = ns.pop("command")
    config_path = ns.pop("config")
    user: Dict[str, Any] = _read_toml(config_path, command) if config_path else {}
    user.update({k: v for k, v in ns.items() if v is not None})
    merged = dict(COMMAND_DEFAULTS[command])
    if "input" in user and "kappa_prime" not in user:
        merged.pop("kappa_prime", None)
    merged.update(user)
    merged["command"] = command
    try:
        return RunConfig(**merged)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> linspace, or a single number; ``pi`` is accepted as a token."""

    def number(token: str) -> float:
        token = token.strip()
        return math.pi if token == "pi" else float(token)

    try:
        parts = text.split(":")
        if len(parts) == 1:
            return np.array([number(parts[0])])
        if len(parts) != 3:
            raise ValueError("expected a:b:n")
        n = int(parts[2])
        if n < 1:
            raise ValueError("n must be positive")
        return np.linspace(number(parts[0]), number(parts[1]), n)
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from exc


def parse_grid(text: str) -> phasespace.PhaseSpaceGrid:
    axes: Dict[str, np.ndarray] = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or key.strip() not in ("x", "p"):
            raise ConfigError(f"bad grid item {item!r}; expected x=a:b:n,p=a:b:n")
        axes[key.strip()] = parse_range(value)
    if set(axes) != {"x", "p"}:
        raise ConfigError("grid needs both x and p")
    x, p = axes["x"], axes["p"]
    try:
        return phasespace.PhaseSpaceGrid(float(x[0]), float(x[-1]), float(p[0]), float(p[-1]), x.size, p.size)
    except PhotonAdderError as exc:
        raise ConfigError(str(exc)) from exc


def parse_binomial(text: str | None) -> BinomialParams:
    if not text:
        raise ConfigError("--binomial N=<int>,p=<float> is required")
    values: Dict[str, str] = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        values[key.strip()] = value.strip()
    try:
        return BinomialParams(N=int(values["N"]), p=float(values["p"]))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad binomial spec {text!r}: {exc}") from exc
    except PhotonAdderError as exc:
        raise ConfigError(str(exc)) from exc


Table = tuple[List[str], np.ndarray, Dict[str, Any]]


def _squeezed_params(cfg: RunConfig, spec: InputSpec, bs: BeamSplitter, n0: int) -> tuple[pasv.PasvParams, float]:
    """Real-kappa' parameters and the phase of kappa'."""
    if cfg.kappa_prime is not None:
        return pasv.PasvParams(kappa_prime=cfg.kappa_prime, n0=n0), 0.0
    kp = bs.T**2 * spec.kappa
    return pasv.PasvParams(kappa_prime=abs(kp), n0=n0), float(np.angle(kp))


def conditional_output(cfg: RunConfig, spec: InputSpec, bs: BeamSplitter, n0: int) -> FockVector | MixtureSpec:
    """Zero-click output state; closed forms for the coherent and squeezed families."""
    if spec.family == "coherent":
        return pacs.pacs_coefficients(pacs.PacsParams.from_input(spec.beta, bs, n0))
    if spec.family == "squeezed":
        params, phase = _squeezed_params(cfg, spec, bs, n0)
        state = pasv.pasv_coefficients(params)
        if phase:
            n = np.arange(state.cutoff + 1)
            state = FockVector(state.amps * np.exp(0.5j * phase * n), tail_bound=state.tail_bound)
        return state
    source = spec.build()
    if isinstance(source, MixtureSpec):
        members, _ = conditional_mixture(source, n0, bs)
        total = math.fsum(w for w, _ in members)
        return mixture_from_pairs((w / total, r.state) for w, r in members)
    return conditional_zero_click(source, n0, bs).state


def _weighted(source: FockVector | MixtureSpec, fn: Callable[[FockVector], np.ndarray]) -> np.ndarray:
    if isinstance(source, FockVector):
        return fn(source)
    return sum(w * fn(s) for w, s in source.pure_members())


def cmd_probability(cfg: RunConfig) -> Table:
    spec = cfg.source()
    if spec.family not in SWEEP_DEFAULTS:
        raise ConfigError("probability sweeps need a coherent or squeezed input")
    bs = cfg.splitter()
    values = parse_range(cfg.sweep or SWEEP_DEFAULTS[spec.family])
    rows = []
    for n0 in cfg.n0:
        for v in values:
            if spec.family == "coherent":
                prob = pacs.pacs_probability(v, bs, n0)
            else:
                prob = pasv.pasv_probability(v, bs, n0, legacy=cfg.legacy)
            rows.append((v, n0, prob))
    param = "abs_beta" if spec.family == "coherent" else "abs_kappa"
    return [param, "n0", "P"], np.array(rows), {"t2": cfg.t2, "family": spec.family}


def cmd_quadrature(cfg: RunConfig) -> Table:
    spec = cfg.source()
    bs = cfg.splitter()
    xs, phis = parse_range(cfg.xs), parse_range(cfg.phi)
    blocks = []
    for n0 in cfg.n0:
        for phi in phis:
            if spec.family == "coherent":
                dens = pacs.pacs_quadrature(xs, phi, pacs.PacsParams.from_input(spec.beta, bs, n0))
            elif spec.family == "squeezed":
                params, phase = _squeezed_params(cfg, spec, bs, n0)
                dens = pasv.pasv_quadrature(xs, phi + 0.5 * phase, params)
            else:
                state = conditional_output(cfg, spec, bs, n0)
                dens = _weighted(state, lambda s: phasespace.quadrature_distribution(s, phi, xs))
            blocks.append(np.column_stack([np.full(xs.size, n0), np.full(xs.size, phi), xs, dens]))
    return ["n0", "phi", "x", "p"], np.vstack(blocks), {"input": spec.label(), "t2": cfg.t2}


def cmd_photon_dist(cfg: RunConfig) -> Table:
    spec = cfg.source()
    bs = cfg.splitter()
    blocks = []
    for n0 in cfg.n0:
        state = conditional_output(cfg, spec, bs, n0)
        if isinstance(state, MixtureSpec):
            dist = state.photon_number_diagonal()
        else:
            dist = np.abs(state.amps) ** 2 / state.norm_squared()
        n = np.arange(dist.size)
        blocks.append(np.column_stack([np.full(dist.size, n0), n, dist]))
    return ["n0", "n", "p"], np.vstack(blocks), {"input": spec.label(), "kappa_prime": cfg.kappa_prime}


def _phase_space(cfg: RunConfig, closed: Callable[..., np.ndarray], generic: Callable[..., np.ndarray]) -> Table:
    spec = cfg.source()
    bs = cfg.splitter()
    grid = parse_grid(cfg.grid)
    blocks = []
    for n0 in cfg.n0:
        if spec.family == "squeezed":
            params, phase = _squeezed_params(cfg, spec, bs, n0)
            x, p = pasv.rotate_grid(grid, phase)
            values = closed(x, p, params)
        else:
            state = conditional_output(cfg, spec, bs, n0)
            values = _weighted(state, lambda s: generic(s, grid))
        blocks.append(np.column_stack([np.full(grid.nx * grid.np, n0), grid_columns(grid, values)]))
    return ["n0", "x", "p", "value"], np.vstack(blocks), {"input": spec.label(), "t2": cfg.t2}


def cmd_wigner(cfg: RunConfig) -> Table:
    return _phase_space(cfg, pasv.pasv_wigner, phasespace.wigner)


def cmd_husimi(cfg: RunConfig) -> Table:
    return _phase_space(cfg, pasv.pasv_husimi, phasespace.husimi)


def cmd_cat(cfg: RunConfig) -> Table:
    spec = cfg.source()
    if spec.family != "squeezed":
        raise ConfigError("cat components exist for squeezed inputs only")
    bs = cfg.splitter()
    grid = parse_grid(cfg.grid)
    blocks = []
    minima: Dict[str, float] = {}
    for n0 in cfg.n0:
        params, _ = _squeezed_params(cfg, spec, bs, n0)
        plus = pasv.cat_components(params, eps=1e-16).plus.normalized()
        w = phasespace.wigner(plus, grid)
        minima[str(n0)] = float(w.min())
        logger.info("component Wigner n0=%s: min %.6e", n0, w.min())
        blocks.append(np.column_stack([np.full(w.size, n0), grid_columns(grid, w)]))
    return ["n0", "x", "p", "value"], np.vstack(blocks), {"input": spec.label(), "min_wigner": minima}


def cmd_mixed(cfg: RunConfig) -> Table:
    spec = cfg.source()
    bs = cfg.splitter()
    bp = parse_binomial(cfg.binomial)
    source = spec.build()
    diag = source.photon_number_diagonal() if isinstance(source, MixtureSpec) else np.abs(source.amps) ** 2
    probabilities = {mode: mixed_probability(diag, bp, bs, mode) for mode in WEIGHT_MODES}
    for mode, value in probabilities.items():
        logger.info("mixed success probability (%s weights): %.6e", mode, value)
    mixture = mixed_conditional(source, bp, bs, cfg.weights)
    xs, phis = parse_range(cfg.xs), parse_range(cfg.phi)
    blocks = [np.column_stack([np.full(xs.size, phi), xs, mixture_quadrature(mixture, phi, xs)]) for phi in phis]
    meta = {"input": spec.label(), "weights": cfg.weights, "probability": probabilities}
    return ["phi", "x", "p"], np.vstack(blocks), meta


def cmd_verify(cfg: RunConfig) -> str:
    results = verify.run_checks(cfg.groups)
    report = verify.format_report(results)
    emit(report, cfg.out)
    failures = [r.name for r in results if not r.passed and not r.informational]
    if failures:
        raise VerificationFailed("; ".join(failures), results)
    return report


HANDLERS: Dict[str, Callable[[RunConfig], Table]] = {
    "probability": cmd_probability,
    "quadrature": cmd_quadrature,
    "photon-dist": cmd_photon_dist,
    "wigner": cmd_wigner,
    "husimi": cmd_husimi,
    "cat": cmd_cat,
    "mixed": cmd_mixed,
}


def run(cfg: RunConfig) -> None:
    if cfg.command == "verify":
        cmd_verify(cfg)
        return
    header, data, meta = HANDLERS[cfg.command](cfg)
    if cfg.format == "json":
        text = format_json(table_document(header, data, command=cfg.command, **meta))
    else:
        text = format_csv(header, data)
    emit(text, cfg.out)


def _configure_logging() -> None:
    logging.basicConfig(
        level=get_settings().log_level.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    try:
        cfg = load_config(argv)
        logger.info("running %s", cfg.command)
        run(cfg)
    except PhotonAdderError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
