"""
Sweep runner for evaluating independent parameter points concurrently.

This module provides the SweepRunner class that spreads the points of a scan
or a ladder over worker threads and hands the results back in input order,
so the emitted records do not depend on the worker count.
"""

import asyncio
from collections.abc import Callable, Sequence
from typing import TypeVar

from .utils.notifications import notification_manager
from .utils.system_resources import get_max_cpu_cores, resolve_workers

T = TypeVar("T")
R = TypeVar("R")


class SweepRunner:
    """
    Runs a pure function over many sweep points with bounded concurrency.

    numpy releases the GIL inside its kernels, so threads started through
    asyncio.to_thread overlap the heavy parts of each evaluation.
    """

    def __init__(self, workers: int | str = 1) -> None:
        """
        Initialize the runner.

        Args:
            workers: Number of concurrent evaluations, or "max" for every
                logical CPU
        """
        self.workers = resolve_workers(workers)
        max_cores = get_max_cpu_cores()
        if self.workers > max_cores:
            notification_manager.warning(
                f"[SweepRunner] {self.workers} workers requested but only {max_cores} "
                f"core(s) available"
            )
        self.completed = 0

    async def run_all(self, func: Callable[[T], R], points: Sequence[T]) -> list[R]:
        """
        Evaluate func at every point, at most `workers` at a time.

        The first exception raised by an evaluation propagates to the caller.

        Returns:
            Results in the order of points
        """
        semaphore = asyncio.Semaphore(self.workers)
        self.completed = 0
        total = len(points)

        async def evaluate(index: int, point: T) -> R:
            async with semaphore:
                result = await asyncio.to_thread(func, point)
            self.completed += 1
            notification_manager.debug(
                f"[SweepRunner] Point {index + 1}/{total} done ({self.completed} completed)"
            )
            return result

        notification_manager.debug(
            f"[SweepRunner] Evaluating {total} point(s) with {self.workers} worker(s)"
        )
        return list(await asyncio.gather(*(evaluate(i, p) for i, p in enumerate(points))))

    def run(self, func: Callable[[T], R], points: Sequence[T]) -> list[R]:
        """Synchronous entry point around run_all."""
        return asyncio.run(self.run_all(func, points))
