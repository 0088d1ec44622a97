"""Signal input specification shared by the CLI and the HTTP API.

Text form: ``family:key=value[,key=value]`` with families
``coherent:beta=1.0`` (beta may be complex, ``1+0.5j``), ``squeezed:kappa=0.67``,
``fock:n=2``, ``thermal:nbar=0.5`` and ``custom:file=state.json``.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from .core.errors import ConfigError
from .fock import FockVector, MixtureSpec, coherent_state, custom_state, fock_state, squeezed_vacuum, thermal_state
from .io import read_state_json

Family = Literal["coherent", "squeezed", "fock", "thermal", "custom"]


class InputSpec(BaseModel):
    family: Family
    beta_re: float = 0.0
    beta_im: float = 0.0
    kappa_re: float = 0.0
    kappa_im: float = 0.0
    n: int = Field(default=0, ge=0)
    nbar: float = Field(default=0.0, ge=0)
    file: Optional[str] = None

    @property
    def beta(self) -> complex:
        return complex(self.beta_re, self.beta_im)

    @property
    def kappa(self) -> complex:
        return complex(self.kappa_re, self.kappa_im)

    def build(self) -> FockVector | MixtureSpec:
        if self.family == "coherent":
            return coherent_state(self.beta)
        if self.family == "squeezed":
            return squeezed_vacuum(self.kappa)
        if self.family == "fock":
            return fock_state(self.n)
        if self.family == "thermal":
            return thermal_state(self.nbar)
        if not self.file:
            raise ConfigError("custom input needs file=<state.json>")
        return custom_state(read_state_json(self.file).amps)

    def label(self) -> str:
        return {
            "coherent": f"coherent:beta={self.beta}",
            "squeezed": f"squeezed:kappa={self.kappa}",
            "fock": f"fock:n={self.n}",
            "thermal": f"thermal:nbar={self.nbar}",
            "custom": f"custom:file={self.file}",
        }[self.family]


_KEYS = {"coherent": "beta", "squeezed": "kappa", "fock": "n", "thermal": "nbar", "custom": "file"}


def parse_input(text: str) -> InputSpec:
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family not in _KEYS:
        raise ConfigError(f"unknown input family {family!r}; expected one of {', '.join(_KEYS)}")
    values: dict[str, object] = {"family": family}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key != _KEYS[family]:
            raise ConfigError(f"input {family!r} takes {_KEYS[family]}=<value>, got {item!r}")
        try:
            if key in ("beta", "kappa"):
                z = complex(value.strip().replace(" ", ""))
                values[f"{key}_re"], values[f"{key}_im"] = z.real, z.imag
            elif key == "n":
                values["n"] = int(value)
            elif key == "nbar":
                values["nbar"] = float(value)
            else:
                values["file"] = value.strip()
        except ValueError as exc:
            raise ConfigError(f"bad value in {item!r}: {exc}") from exc
    try:
        return InputSpec(**values)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
