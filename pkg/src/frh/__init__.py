"""Fractional Rosenau-Hyman and KdV series laboratory."""

__version__ = "0.1.0"
