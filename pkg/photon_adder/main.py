from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .core.config import get_settings
from .core.errors import PhotonAdderError
from .routers import health, probability, states


settings = get_settings()
app = FastAPI(title=settings.app_name, version=__version__)

# CORS (origins from env, default localhost:3000)
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.allowed_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.on_event("startup")
def _log_settings() -> None:  # pragma: no cover
    logging.getLogger("uvicorn.error").info(
        "CORS allow_origins=%s tail_eps=%s hard_cap=%s",
        settings.allowed_origins,
        settings.tail_eps,
        settings.hard_cap,
    )


@app.exception_handler(PhotonAdderError)
def _numeric_error(request: Request, exc: PhotonAdderError) -> JSONResponse:
    return JSONResponse({"error": str(exc), "type": type(exc).__name__}, status_code=422)


app.include_router(health.router, prefix="/api")
app.include_router(probability.router, prefix="/api")
app.include_router(states.router, prefix="/api")


@app.get("/")
def root_index() -> dict:
    return {
        "message": "photon-adder API is running.",
        "api_health": "/api/health",
        "api_root": "/api",
        "name": settings.app_name,
        "version": __version__,
    }


@app.get("/api")
def root() -> dict:
    return {"name": settings.app_name, "version": __version__}
