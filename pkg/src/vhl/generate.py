"""Seeded random instances: k-partite graphs, complete graphs and few-valued HMMs."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .core import INF, HmmInstance, KPartiteGraph, ValidationError


def rng_for(seed: int) -> np.random.Generator:
    """PCG64 stream for a 64-bit seed; identical draws on every platform."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def random_kpartite(part_sizes: Sequence[int], low: int, high: int, rng) -> KPartiteGraph:
    """Complete k-partite graph with weights drawn uniformly from ``[low, high]``."""
    if low < 1 or high < low:
        raise ValidationError(f"invalid weight range {low}..{high}")
    sizes = tuple(int(s) for s in part_sizes)
    if any(s < 1 for s in sizes) or len(sizes) < 2:
        raise ValidationError(f"invalid part sizes {list(sizes)}")
    weights = {}
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            weights[(i, j)] = rng.integers(low, high + 1, size=(sizes[i], sizes[j]))
    return KPartiteGraph(sizes, weights)


def random_complete_graph(n: int, low: int, high: int, rng) -> np.ndarray:
    """Symmetric integer weight matrix of a complete graph (diagonal zero)."""
    w = rng.integers(low, high + 1, size=(n, n))
    w = np.triu(w, 1)
    return w + w.T


def random_cost_matrix(rows: int, cols: int, d: int, inf_density: float, rng,
                       values: Optional[np.ndarray] = None) -> np.ndarray:
    """Matrix whose finite entries come from ``d`` distinct integer values."""
    if values is None:
        values = rng.choice(np.arange(0, max(4 * d, 8)), size=d, replace=False).astype(np.float64)
    M = rng.choice(values, size=(rows, cols))
    M[rng.random((rows, cols)) < inf_density] = INF
    return M


def random_hmm(n: int, sigma: int, T: int, rng, d: Optional[int] = None,
               inf_density: float = 0.0, integer: bool = True) -> tuple[HmmInstance, np.ndarray]:
    """Random instance and observation sequence.

    With ``d`` set, transition costs take at most ``d`` distinct finite values.
    ``integer=False`` draws continuous costs (ties have probability zero).
    """
    if d is not None:
        A = random_cost_matrix(n, n, d, inf_density, rng)
    elif integer:
        A = rng.integers(0, 10, size=(n, n)).astype(np.float64)
        A[rng.random((n, n)) < inf_density] = INF
    else:
        A = rng.random((n, n)) * 5
        A[rng.random((n, n)) < inf_density] = INF
    if integer:
        B = rng.integers(0, 10, size=(n, sigma)).astype(np.float64)
    else:
        B = rng.random((n, sigma)) * 5
    obs = rng.integers(0, sigma, size=T)
    return HmmInstance(A, B, 0), obs
