"""Compare the jitted and pure-numpy kernel builds.

Runs both variants directly (independent of the HEATALIGN_NUMBA env flag) on
bounded edit distance and posting-list counting workloads.

Usage: python benchmarks/bench_kernels.py [--pairs N] [--seed S]
"""
import argparse
import random
import string
import time

import numpy as np

from heatalign import kernels
from heatalign.kernels import (
    _lev_bounded_impl,
    _lev_bounded_numpy,
    _posting_counts_impl,
    _posting_counts_numpy,
    encode,
)


def build_variants():
    variants = {"numpy": (_lev_bounded_numpy, _posting_counts_numpy)}
    try:
        from numba import njit
    except ImportError:
        print("numba not installed; benchmarking the numpy build only")
        return variants
    variants["numba"] = (
        njit(cache=True, nogil=True)(_lev_bounded_impl),
        njit(cache=True, nogil=True)(_posting_counts_impl),
    )
    return variants


def bench_levenshtein(variants, pairs, limit=3):
    print(f"\nbounded Levenshtein ({len(pairs)} pairs, limit={limit}):")
    results = {}
    for name, (lev, _) in variants.items():
        lev(pairs[0][0], pairs[0][1], limit)  # warm up / compile
        start = time.perf_counter()
        total = 0
        for a, b in pairs:
            total += int(lev(a, b, limit))
        elapsed = time.perf_counter() - start
        results[name] = (elapsed, total)
        rate = len(pairs) / elapsed
        print(f"  {name:>6}: {elapsed * 1e3:8.1f} ms  ({rate:,.0f} pairs/s)")
    checks = {total for _, total in results.values()}
    assert len(checks) == 1, f"variants disagree: {results}"


def bench_posting_counts(variants, rng, n_values=50_000, n_postings=2_000_000):
    postings = rng.integers(0, n_values, size=n_postings).astype(np.int64)
    print(f"\nposting counts ({n_postings:,} postings over {n_values:,} values):")
    sums = set()
    for name, (_, count) in variants.items():
        count(postings[:16], np.zeros(n_values, dtype=np.int64))  # warm up
        start = time.perf_counter()
        counts = count(postings, np.zeros(n_values, dtype=np.int64))
        elapsed = time.perf_counter() - start
        sums.add(int(counts.sum()))
        print(f"  {name:>6}: {elapsed * 1e3:8.1f} ms")
    assert sums == {n_postings}, "variants disagree"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"active build: {'numba' if kernels.USING_NUMBA else 'numpy'} "
          "(set HEATALIGN_NUMBA=0 to force numpy)")
    variants = build_variants()

    rng = random.Random(args.seed)
    words = [
        "".join(rng.choice(string.ascii_lowercase)
                for _ in range(rng.randint(5, 12)))
        for _ in range(2 * args.pairs)
    ]
    pairs = [(encode(words[2 * i]), encode(words[2 * i + 1]))
             for i in range(args.pairs)]
    bench_levenshtein(variants, pairs)
    bench_posting_counts(variants, np.random.default_rng(args.seed))


if __name__ == "__main__":
    main()
