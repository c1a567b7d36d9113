"""
System resource detection utilities for maslov-kernel.

This module resolves the worker count of a sweep, including the "max" value
that selects every logical CPU.
"""

import os

import psutil


def get_max_cpu_cores() -> int:
    """
    Get the number of logical CPU cores available on the system.

    Returns:
        Number of logical CPUs. Defaults to 1 if detection fails.
    """
    try:
        cores = psutil.cpu_count(logical=True) or os.cpu_count()
        if cores is None or cores <= 0:
            return 1
        return cores
    except Exception:
        return 1


def get_available_memory_mb() -> int:
    """Available memory in MB, or 1024 if detection fails."""
    try:
        available = int(psutil.virtual_memory().available / (1024**2))
        return available if available > 0 else 1024
    except Exception:
        return 1024


def resolve_workers(value: str | int) -> int:
    """
    Resolve a worker count given as an integer or the string "max".

    Raises:
        ValueError: If value is a non-positive integer
        TypeError: If value is neither an int nor "max"
    """
    if isinstance(value, int):
        if value < 1:
            raise ValueError(f"Worker count must be positive, got {value}")
        return value
    if value.lower() == "max":
        return get_max_cpu_cores()
    raise TypeError(f"Value must be an integer or 'max', got {type(value).__name__}: {value}")

