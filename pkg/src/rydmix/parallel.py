"""Thread-pool helper for embarrassingly parallel sweeps.

The RYDMIX_THREADS environment variable caps the worker count (default:
machine parallelism).  Results always come back in input order, so sweep
output is deterministic regardless of the thread count.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    env = os.environ.get("RYDMIX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            warnings.warn(f"ignoring invalid RYDMIX_THREADS={env!r}", stacklevel=2)
    return os.cpu_count() or 1


def thread_map(fn, items) -> list:
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
