"""Utility functions and helpers for maslov-kernel."""
