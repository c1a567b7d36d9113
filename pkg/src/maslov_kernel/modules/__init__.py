"""Numerical modules and managers for maslov-kernel."""

from .output_manager import output_manager

__all__ = ["output_manager"]
