from __future__ import annotations

import pytest

from photon_adder.conditional import BeamSplitter
from photon_adder.core import config


@pytest.fixture
def bs08() -> BeamSplitter:
    """Reference beam splitter, |T|^2 = 0.8."""
    return BeamSplitter.from_transmittance(0.8)


@pytest.fixture
def fresh_settings(monkeypatch):
    """Drop the cached settings so environment overrides take effect."""
    monkeypatch.setattr(config, "_SETTINGS_CACHE", None)
    yield
    config._SETTINGS_CACHE = None
