"""CSV and JSON emitters for command output.

CSV: header line, comma separated, every value as ``%.16e`` (17 significant
digits).  JSON: pydantic documents dumped with sorted keys.  Neither carries
timestamps, so identical input gives byte-identical files.
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from .fock import FockVector
from .phasespace import PhaseSpaceGrid

CSV_FORMAT = "%.16e"


class TableDocument(BaseModel):
    columns: List[str]
    rows: List[List[float]]
    meta: Dict[str, Any] = Field(default_factory=dict)


class StateDocument(BaseModel):
    """FockVector schema: cutoff, re, im, tail_bound."""

    cutoff: int
    re: List[float]
    im: List[float]
    tail_bound: float = 0.0
    probability: Optional[float] = None

    @classmethod
    def from_state(cls, state: FockVector, probability: float | None = None) -> StateDocument:
        return cls(**state.to_dict(), probability=probability)

    def to_state(self) -> FockVector:
        return FockVector.from_dict(self.model_dump())


def grid_columns(grid: PhaseSpaceGrid, values: np.ndarray) -> np.ndarray:
    """Row-major (x, p, value) triples of a (nx, np) matrix."""
    x, p = grid.mesh()
    return np.column_stack([x.ravel(), p.ravel(), np.asarray(values, dtype=float).ravel()])


def format_csv(header: Sequence[str], data: np.ndarray) -> str:
    buf = io.StringIO()
    np.savetxt(buf, np.atleast_2d(np.asarray(data, dtype=float)), fmt=CSV_FORMAT, delimiter=",", header=",".join(header), comments="")
    return buf.getvalue()


def format_json(document: BaseModel) -> str:
    return json.dumps(document.model_dump(), sort_keys=True, indent=2) + "\n"


def table_document(header: Sequence[str], data: np.ndarray, **meta: Any) -> TableDocument:
    rows = np.atleast_2d(np.asarray(data, dtype=float))
    return TableDocument(columns=list(header), rows=rows.tolist(), meta=meta)


def emit(text: str, out: str | Path | None) -> None:
    """Write once, to ``out`` or stdout."""
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text, encoding="utf-8")


def read_state_json(path: str | Path) -> FockVector:
    """Custom input states: a StateDocument JSON file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return StateDocument.model_validate(data).to_state()
