"""Photon-added quantum states: conditional beam-splitter preparation and phase-space analysis."""

__version__ = "0.1.0"
