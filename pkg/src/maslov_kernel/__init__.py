"""Maslov Kernel - Discrete-time path-integral propagator of the harmonic oscillator at any time, including the Maslov phase and the caustic delta limit."""

__version__ = "0.3.0"
__author__ = "Maslov Kernel Developers"

from .main import app

__all__ = ["app"]
