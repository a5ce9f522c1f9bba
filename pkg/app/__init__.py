"""Persuasion toolkit: optimal signaling for two-location resource competition."""

__version__ = "0.1.0"
