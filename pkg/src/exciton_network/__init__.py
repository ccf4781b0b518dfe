"""Exciton Network - stationary transport and coherence in random quantum networks."""

__version__ = "0.1.0"
