"""Exhaustive ground-truth solvers for min-weight triangle / k-clique."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .core import KPartiteGraph, ValidationError

CLIQUE_BUDGET = 20_000_000


def thread_count() -> int:
    """Worker count from ``VHL_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("VHL_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"VHL_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValidationError(f"VHL_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def min_triangle_bf(G: KPartiteGraph) -> tuple[int, tuple[int, int, int]]:
    """Minimum triangle weight and the lexicographically smallest optimal ``(v1, v2, u)``."""
    if G.k != 3:
        raise ValidationError(f"triangle oracle needs 3 parts, got {G.k}")
    total = G.w(0, 1)[:, :, None] + G.w(0, 2)[:, None, :] + G.w(1, 2)[None, :, :]
    flat = int(np.argmin(total))
    idx = np.unravel_index(flat, total.shape)
    return int(total[idx]), tuple(int(i) for i in idx)


def _clique_table(G: KPartiteGraph, first: slice) -> np.ndarray:
    sizes = list(G.part_sizes)
    sizes[0] = len(range(*first.indices(sizes[0])))
    total = np.zeros(sizes, dtype=np.int64)
    for i in range(G.k):
        for j in range(i + 1, G.k):
            w = G.w(i, j)
            if i == 0:
                w = w[first]
            shape = [1] * G.k
            shape[i], shape[j] = w.shape
            total = total + w.reshape(shape)
    return total


def min_kclique_bf(G: KPartiteGraph, budget: int = CLIQUE_BUDGET,
                   threads: Optional[int] = None) -> tuple[int, tuple[int, ...]]:
    """Minimum k-clique weight over all ``prod(part_sizes)`` vertex tuples.

    The witness is the lexicographically smallest optimal tuple.  Slices of the
    first part are evaluated on up to ``threads`` workers and merged in order.
    """
    total = int(np.prod(G.part_sizes, dtype=object))
    if total > budget:
        raise ValidationError(f"{total} tuples exceed the clique oracle budget {budget}")
    threads = thread_count() if threads is None else max(1, threads)
    n0 = G.part_sizes[0]
    chunks = max(1, min(threads, n0, total // 200_000 + 1))
    bounds = np.linspace(0, n0, chunks + 1).astype(int)
    slices = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def best_in(sl):
        table = _clique_table(G, sl)
        flat = int(np.argmin(table))
        idx = np.unravel_index(flat, table.shape)
        return int(table[idx]), (int(idx[0]) + sl.start,) + tuple(int(i) for i in idx[1:])

    if len(slices) == 1:
        results = [best_in(slices[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(slices)) as pool:
            results = list(pool.map(best_in, slices))
    # slices are in increasing first-index order, so min keeps the lexicographic tie-break
    return min(results)


def min_kclique_general_bf(weights: np.ndarray, k: int, budget: int = CLIQUE_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Minimum k-clique of a complete graph given by a symmetric weight matrix."""
    weights = np.asarray(weights)
    n = weights.shape[0]
    if k < 2 or k > n:
        raise ValidationError(f"no {k}-clique in a {n}-vertex graph")
    best = None
    count = 0
    for combo in itertools.combinations(range(n), k):
        count += 1
        if count > budget:
            raise ValidationError(f"more than {budget} vertex subsets")
        w = sum(int(weights[a, b]) for a, b in itertools.combinations(combo, 2))
        if best is None or w < best[0]:
            best = (w, combo)
    return best
