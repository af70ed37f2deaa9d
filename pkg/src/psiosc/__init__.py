"""Irrationality measure functions and the sign oscillation of their differences."""

__version__ = "0.1.0"
