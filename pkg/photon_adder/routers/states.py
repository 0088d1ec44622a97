"""Conditional states and their homodyne densities over HTTP."""

from __future__ import annotations

from typing import List

import numpy as np
from fastapi import APIRouter
from pydantic import BaseModel, Field

from ..conditional import BeamSplitter, conditional_mixture, conditional_zero_click
from ..core.errors import DomainError
from ..fock import MixtureSpec
from ..inputs import InputSpec
from ..io import StateDocument
from ..phasespace import quadrature_distribution


router = APIRouter()


class SplitterModel(BaseModel):
    t2: float = Field(default=0.8, ge=0, le=1)
    phi_t: float = 0.0
    phi_r: float = 0.0

    def build(self) -> BeamSplitter:
        return BeamSplitter.from_transmittance(self.t2, self.phi_t, self.phi_r)


class ConditionalRequest(BaseModel):
    input: InputSpec
    beam_splitter: SplitterModel = Field(default_factory=SplitterModel)
    n0: int = Field(default=1, ge=0)


class QuadratureRequest(ConditionalRequest):
    phi: float = 0.0
    xs: List[float] = Field(..., min_length=1)


class QuadratureResponse(BaseModel):
    phi: float
    xs: List[float]
    density: List[float]
    probability: float


def _source(payload: ConditionalRequest):
    # server-side files stay out of reach of HTTP clients
    if payload.input.family == "custom":
        raise DomainError("custom inputs are available from the command line only")
    return payload.input.build()


def _pure_input(payload: ConditionalRequest):
    source = _source(payload)
    if isinstance(source, MixtureSpec):
        raise DomainError("mixed inputs are not supported here; use /quadrature")
    return source


@router.post("/conditional", response_model=StateDocument)
def conditional(payload: ConditionalRequest) -> StateDocument:
    result = conditional_zero_click(_pure_input(payload), payload.n0, payload.beam_splitter.build())
    return StateDocument.from_state(result.state, probability=result.probability)


@router.post("/quadrature", response_model=QuadratureResponse)
def quadrature(payload: QuadratureRequest) -> QuadratureResponse:
    source = _source(payload)
    bs = payload.beam_splitter.build()
    xs = np.asarray(payload.xs, dtype=float)
    if isinstance(source, MixtureSpec):
        members, probability = conditional_mixture(source, payload.n0, bs)
        total = sum(w for w, _ in members)
        density = sum(w / total * quadrature_distribution(r.state, payload.phi, xs) for w, r in members)
    else:
        result = conditional_zero_click(source, payload.n0, bs)
        density, probability = quadrature_distribution(result.state, payload.phi, xs), result.probability
    return QuadratureResponse(phi=payload.phi, xs=payload.xs, density=list(map(float, density)), probability=probability)
