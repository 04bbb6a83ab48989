"""Vacuum pair production in elliptically polarized pulses via per-mode Wigner dynamics."""

__version__ = "0.1.0"
