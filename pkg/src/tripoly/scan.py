"""Blocked exclusive prefix sum and bit-vector stream compaction.

Reduce-then-scan: each worker sums its block, the block sums are scanned
serially (one value per worker), then each worker writes its block using
its offset. Work is O(n) and the span is O(n / workers + workers).
"""

from __future__ import annotations

import numpy as np

from ._nav import jit
from .pool import KernelPool


@jit
def _block_sum(values, lo, hi):
    s = 0
    for i in range(lo, hi):
        s += values[i]
    return s


@jit
def _block_scan(values, out, lo, hi, offset):
    run = offset
    for i in range(lo, hi):
        out[i] = run
        run += values[i]


@jit
def _block_count(bits, lo, hi):
    s = 0
    for i in range(lo, hi):
        if bits[i]:
            s += 1
    return s


@jit
def _block_scatter(bits, out, lo, hi, offset):
    slot = offset
    for i in range(lo, hi):
        if bits[i]:
            out[slot] = i
            slot += 1


def _block_offsets(pool: KernelPool, blocks, reduce) -> tuple[dict, int]:
    sums = pool.run(reduce, blocks)
    starts = np.zeros(len(blocks) + 1, dtype=np.int64)
    np.cumsum(sums, out=starts[1:])
    return {b: int(starts[i]) for i, b in enumerate(blocks)}, int(starts[-1])


def exclusive_scan(values, pool: KernelPool | None = None) -> tuple[np.ndarray, int]:
    """Exclusive prefix sum of an integer array; returns ``(scan, total)``."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    pool = pool or KernelPool(1)
    out = np.empty_like(values)
    if len(values) == 0:
        return out, 0
    blocks = pool.chunks(len(values))
    offset, total = _block_offsets(pool, blocks, lambda lo, hi: _block_sum(values, lo, hi))
    pool.run(lambda lo, hi: _block_scan(values, out, lo, hi, offset[(lo, hi)]), blocks)
    return out, total


def compact_seeds(seed_bits, pool: KernelPool | None = None) -> np.ndarray:
    """Indices of set bits, increasing; each bit's slot is its exclusive prefix sum."""
    bits = np.ascontiguousarray(seed_bits, dtype=np.bool_)
    pool = pool or KernelPool(1)
    if len(bits) == 0:
        return np.empty(0, dtype=np.int64)
    blocks = pool.chunks(len(bits))
    offset, total = _block_offsets(pool, blocks, lambda lo, hi: _block_count(bits, lo, hi))
    out = np.empty(total, dtype=np.int64)
    pool.run(lambda lo, hi: _block_scatter(bits, out, lo, hi, offset[(lo, hi)]), blocks)
    return out
