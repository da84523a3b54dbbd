"""Exact DoF regions for broadcast channels with alternating/hybrid CSIT."""

__version__ = "0.1.0"
