"""Airline tweet sentiment monitoring pipeline."""

__version__ = "0.1.0"
