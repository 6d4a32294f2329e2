"""Hot numeric kernels: bounded edit distance and posting-list counting.

Both kernels exist in two variants: a numba ``@njit`` build (default) and a
pure-numpy fallback. Set ``HEATALIGN_NUMBA=0`` in the environment to force
the numpy path; ``USING_NUMBA`` reports which one is active. The two are
exercised against each other in ``benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import os
from functools import lru_cache

import numpy as np


def _lev_bounded_impl(a, b, limit):
    # Classic row-by-row DP over int32 code arrays with an early exit once the
    # best value in a row exceeds `limit`. Returns limit + 1 when the true
    # distance is larger than limit.
    la = a.shape[0]
    lb = b.shape[0]
    if la - lb > limit or lb - la > limit:
        return limit + 1
    prev = np.arange(lb + 1)
    for i in range(1, la + 1):
        cur = np.empty(lb + 1, np.int64)
        cur[0] = i
        best = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ai == b[j - 1] else 1
            v = prev[j] + 1
            w = cur[j - 1] + 1
            if w < v:
                v = w
            w = prev[j - 1] + cost
            if w < v:
                v = w
            cur[j] = v
            if v < best:
                best = v
        if best > limit:
            return limit + 1
        prev = cur
    d = prev[lb]
    if d > limit:
        return limit + 1
    return d


def _lev_bounded_numpy(a, b, limit):
    # Same recurrence with the inner loop vectorized; the deletion dependency
    # current[j] = min(cand[j], current[j-1] + 1) is a prefix minimum:
    # current = cummin(cand - j) + j.
    la = a.shape[0]
    lb = b.shape[0]
    if abs(la - lb) > limit:
        return limit + 1
    idx = np.arange(lb + 1)
    prev = idx.copy()
    for i in range(1, la + 1):
        cost = (b != a[i - 1]).astype(np.int64)
        cand = np.empty(lb + 1, np.int64)
        cand[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + cost, out=cand[1:])
        cur = np.minimum.accumulate(cand - idx) + idx
        if cur.min() > limit:
            return limit + 1
        prev = cur
    d = int(prev[lb])
    return d if d <= limit else limit + 1


def _posting_counts_impl(postings, counts):
    # Scatter-add of posting-list hits into a dense counter array.
    for i in range(postings.shape[0]):
        counts[postings[i]] += 1
    return counts


def _posting_counts_numpy(postings, counts):
    counts += np.bincount(postings, minlength=counts.shape[0]).astype(counts.dtype)
    return counts


def _numba_enabled() -> bool:
    if os.environ.get("HEATALIGN_NUMBA", "1") == "0":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _numba_enabled()

if USING_NUMBA:
    from numba import njit

    _lev_bounded = njit(cache=True, nogil=True)(_lev_bounded_impl)
    _posting_counts = njit(cache=True, nogil=True)(_posting_counts_impl)
else:
    _lev_bounded = _lev_bounded_numpy
    _posting_counts = _posting_counts_numpy


@lru_cache(maxsize=65536)
def encode(s: str) -> np.ndarray:
    """Encode a string as an int32 code-point array."""
    return np.array([ord(c) for c in s], dtype=np.int32)


def bounded_distance(a: np.ndarray, b: np.ndarray, limit: int) -> int:
    """Edit distance between two code arrays, or ``limit + 1`` if it exceeds limit."""
    if limit < 0:
        return limit + 1
    return int(_lev_bounded(a, b, limit))


def distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance between two strings."""
    ca, cb = encode(a), encode(b)
    return int(_lev_bounded(ca, cb, ca.shape[0] + cb.shape[0]))


def posting_counts(postings: np.ndarray, n: int) -> np.ndarray:
    """Count occurrences of each index in ``postings`` into a length-``n`` array."""
    counts = np.zeros(n, dtype=np.int64)
    if postings.shape[0]:
        _posting_counts(postings, counts)
    return counts
