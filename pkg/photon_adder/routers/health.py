from __future__ import annotations

from typing import Dict

from fastapi import APIRouter

from ..core.config import get_settings


router = APIRouter()


@router.get("/health")
def health() -> Dict[str, str]:
    return {"status": "ok", "name": get_settings().app_name}
