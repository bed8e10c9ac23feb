"""Segmented prime sieve with deterministic, worker-count-independent reduction.

Segments span a fixed 2**20 integers.  Parallel runs hand whole segments to
worker threads and always reduce the per-segment results in segment order,
so outputs are bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

import numpy as np

from .errors import LimitExceeded

SEGMENT_SPAN = 1 << 20
PRIME_LIMIT = 10**9

R = TypeVar("R")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SMOLAB_WORKERS", "1")))
    except ValueError:
        return 1


def simple_sieve(limit: int) -> np.ndarray:
    """Dense sieve; fine up to ~10**7, used for base primes and as an oracle."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p:: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _check_limit(limit: int) -> None:
    if limit > PRIME_LIMIT:
        raise LimitExceeded(f"prime enumeration capped at {PRIME_LIMIT}, got {limit}")


def _segment_bounds(limit: int) -> list[tuple[int, int]]:
    bounds = []
    low = 2
    while low <= limit:
        high = min(low + SEGMENT_SPAN, limit + 1)
        bounds.append((low, high))
        low = high
    return bounds


def _sieve_segment(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Primes in [low, high) given base primes up to sqrt(high)."""
    mask = np.ones(high - low, dtype=bool)
    if low <= 1:
        mask[: max(0, 2 - low)] = False
    for p in base:
        p = int(p)
        if p * p >= high:
            break
        start = max(p * p, ((low + p - 1) // p) * p)
        mask[start - low:: p] = False
    if low <= 2 < high:
        mask[2 - low] = True
    return low + np.flatnonzero(mask)


def iter_prime_segments(limit: int) -> Iterator[np.ndarray]:
    """Yield int64 arrays of primes, one array per segment, ascending."""
    _check_limit(limit)
    if limit < 2:
        return
    base = simple_sieve(math.isqrt(limit) + 1)
    for low, high in _segment_bounds(limit):
        yield _sieve_segment(low, high, base)


def primes_up_to(limit: int) -> Iterator[int]:
    """Ordered stream of the primes <= limit."""
    for seg in iter_prime_segments(limit):
        yield from (int(p) for p in seg)


def prime_array(limit: int) -> np.ndarray:
    segs = list(iter_prime_segments(limit))
    if not segs:
        return np.array([], dtype=np.int64)
    return np.concatenate(segs)


def prime_count(limit: int, workers: int | None = None) -> int:
    return int(segment_reduce(limit, lambda seg: len(seg), workers=workers, initial=0,
                              combine=lambda acc, x: acc + x))


def segment_map(limit: int, fn: Callable[[np.ndarray], R],
                workers: int | None = None) -> list[R]:
    """Apply ``fn`` to each segment's prime array; results in segment order."""
    _check_limit(limit)
    if limit < 2:
        return []
    workers = workers if workers is not None else default_workers()
    base = simple_sieve(math.isqrt(limit) + 1)
    bounds = _segment_bounds(limit)

    def job(b: tuple[int, int]) -> R:
        return fn(_sieve_segment(b[0], b[1], base))

    if workers <= 1 or len(bounds) == 1:
        return [job(b) for b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, bounds))


def segment_reduce(limit: int, fn: Callable[[np.ndarray], R], *,
                   initial, combine: Callable[[R, R], R],
                   workers: int | None = None):
    """Map over segments, then fold the per-segment results in fixed order."""
    acc = initial
    for part in segment_map(limit, fn, workers=workers):
        acc = combine(acc, part)
    return acc


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every 64-bit integer."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
