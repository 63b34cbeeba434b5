"""Deterministic fan-out helper for independent work items."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "KEC_THREADS"


def resolve_threads(threads=None) -> int:
    """Explicit value, else the KEC_THREADS env var, else machine parallelism."""
    if threads is None:
        env = os.environ.get(ENV_THREADS)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def map_ordered(fn, items, threads: int = 1) -> list:
    """Apply fn to every item, returning results in input order.

    The reduction is an ordered collect, so results never depend on the
    schedule; threads only change wall-clock time.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
