from __future__ import annotations

from typing import Any, Dict, Optional

from fastapi import APIRouter, Query

from ..added_coherent import pacs_probability
from ..added_squeezed import pasv_probability
from ..conditional import BeamSplitter


router = APIRouter()


@router.get("/probability/coherent")
def coherent_probability(
    beta: float = Query(..., ge=0, description="|beta| of the coherent input"),
    t2: float = Query(default=0.8, ge=0, le=1),
    n0: int = Query(default=1, ge=0),
) -> Dict[str, Any]:
    bs = BeamSplitter.from_transmittance(t2)
    return {"beta": beta, "t2": t2, "n0": n0, "probability": pacs_probability(beta, bs, n0)}


@router.get("/probability/squeezed")
def squeezed_probability(
    kappa: float = Query(..., ge=0, lt=1, description="|kappa| of the squeezed vacuum input"),
    t2: float = Query(default=0.8, ge=0, le=1),
    n0: int = Query(default=1, ge=0),
    kappa_prime: Optional[float] = Query(default=None, gt=-1, lt=1),
    legacy: bool = Query(default=False),
) -> Dict[str, Any]:
    bs = BeamSplitter.from_transmittance(t2)
    probability = pasv_probability(kappa, bs, n0, kappa_prime=kappa_prime, legacy=legacy)
    return {"kappa": kappa, "t2": t2, "n0": n0, "probability": probability}
