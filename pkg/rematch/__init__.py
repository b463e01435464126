"""Rematch - online min-cost metric matching with recourse (simulators, adversaries, checks)."""

__version__ = "0.1.0"
