"""Timing harness: naive tropical MV versus the decomposed online MV."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .generate import random_cost_matrix, rng_for
from .minplus import OmvConfig, decompose, mv_minplus, omv_query


@dataclass
class BenchResult:
    n: int
    d: int
    T: int
    substrate: str
    buckets: int
    naive_seconds: list[float]
    fast_seconds: list[float]
    decompose_seconds: float
    agree: bool

    @property
    def naive_median(self) -> float:
        return statistics.median(self.naive_seconds)

    @property
    def fast_median(self) -> float:
        return statistics.median(self.fast_seconds)

    @property
    def speedup(self) -> float:
        return self.naive_median / self.fast_median

    def lines(self) -> list[str]:
        return [
            f"n={self.n}", f"d={self.d}", f"T={self.T}", f"substrate={self.substrate}",
            f"buckets={self.buckets}", f"repetitions={len(self.naive_seconds)}",
            f"decompose_seconds={self.decompose_seconds:.6f}",
            f"naive_median_seconds={self.naive_median:.6f}",
            f"fast_median_seconds={self.fast_median:.6f}",
            f"naive_queries_per_second={self.T / self.naive_median:.3f}",
            f"fast_queries_per_second={self.T / self.fast_median:.3f}",
            f"speedup={self.speedup:.3f}",
            f"agree={str(self.agree).lower()}",
        ]


def run_bench(n: int, d: int, T: int, cfg: OmvConfig, repetitions: int = 5,
              seed: int = 0, inf_density: float = 0.0) -> BenchResult:
    """Time ``T`` queries against one random ``n x n`` matrix with ``d`` distinct values.

    Each repetition runs the whole query stream through both methods; the
    matrix decomposition is timed once, separately.
    """
    rng = rng_for(seed)
    A = random_cost_matrix(n, n, d, inf_density, rng)
    queries = [rng.integers(0, 1000, size=n).astype(np.float64) for _ in range(T)]

    t0 = time.perf_counter()
    decomp = decompose(A)
    dec_s = time.perf_counter() - t0

    naive_s, fast_s = [], []
    agree = True
    for _ in range(repetitions):
        t0 = time.perf_counter()
        ref = [mv_minplus(A, v) for v in queries]
        naive_s.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        got = [omv_query(decomp, v, cfg)[0] for v in queries]
        fast_s.append(time.perf_counter() - t0)
        agree = agree and all(np.array_equal(a, b) for a, b in zip(ref, got))
    return BenchResult(n, d, T, cfg.substrate.value, cfg.buckets(n), naive_s, fast_s, dec_s, agree)
