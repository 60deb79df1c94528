"""Shared-memory executor for data-parallel kernels.

A kernel is a compiled function ``kernel(lo, hi, order, *args)`` that
processes work-items ``order[lo:hi]`` (or ``lo:hi`` directly when ``order``
is empty). :meth:`KernelPool.launch` splits the item range into one chunk
per worker, runs the chunks on threads (the kernels release the GIL) and
returns only after every chunk finished, which is the barrier between
consecutive kernels.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

EMPTY_ORDER = np.empty(0, dtype=np.int64)


def default_workers() -> int:
    env = os.environ.get("POLYLLA_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class KernelPool:
    """Run kernels over ``workers`` threads.

    With ``permute_seed`` set, every launch visits its work-items in a fresh
    pseudo-random order and submits chunks in shuffled order; results of a
    correct kernel must not change.
    """

    def __init__(self, workers: int = 1, permute_seed: int | None = None):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self._rng = np.random.default_rng(permute_seed) if permute_seed is not None else None
        self._executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def close(self):
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def chunks(self, n: int) -> list[tuple[int, int]]:
        """Contiguous ``[lo, hi)`` blocks covering ``range(n)``, in order."""
        k = max(1, min(self.workers, n))
        bounds = np.linspace(0, n, k + 1).astype(np.int64)
        return [(int(bounds[i]), int(bounds[i + 1])) for i in range(k)]

    def launch(self, kernel, n_items: int, *args):
        if n_items == 0:
            return
        order = self._rng.permutation(n_items).astype(np.int64) if self._rng is not None else EMPTY_ORDER
        self.run(lambda lo, hi: kernel(lo, hi, order, *args), self.chunks(n_items))

    def run(self, fn, blocks) -> list:
        """Call ``fn(lo, hi)`` on every block and wait for all; results in block order."""
        submit = list(range(len(blocks)))
        if self._rng is not None:
            self._rng.shuffle(submit)
        results = [None] * len(blocks)
        if self._executor is None or len(blocks) == 1:
            for i in submit:
                results[i] = fn(*blocks[i])
            return results
        futures = {i: self._executor.submit(fn, *blocks[i]) for i in submit}
        for i in submit:
            results[i] = futures[i].result()
        return results
