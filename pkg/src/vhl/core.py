"""Extended-cost arithmetic and the problem-instance types shared across the package.

Costs are non-negative float64 values with ``math.inf`` as the absorbing
"no edge / impossible" value.  Matrices are plain numpy arrays that get
frozen (``writeable=False``) once they are owned by an instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

INF = math.inf


class ValidationError(ValueError):
    """An instance, observation sequence or graph violates its invariants."""


def ext_cost(x) -> float:
    """Coerce ``x`` to an extended cost, rejecting NaN and negative values."""
    if isinstance(x, str):
        if x.strip().lower() != "inf":
            raise ValidationError(f"not a cost: {x!r}")
        return INF
    x = float(x)
    if math.isnan(x):
        raise ValidationError("NaN is not a cost")
    if x < 0:
        raise ValidationError(f"negative cost {x}")
    return x


def ext_add(a: float, b: float) -> float:
    # inf + finite is inf in IEEE arithmetic; inf - inf never arises because costs are >= 0
    return a + b


def cost_array(values, ndim: int, name: str = "matrix") -> np.ndarray:
    """Build a read-only float64 cost array, accepting ``"inf"`` strings as entries."""
    if isinstance(values, np.ndarray) and values.dtype.kind in "fiu":
        arr = np.array(values, dtype=np.float64)
    else:
        arr = np.array(_map_inf(values), dtype=np.float64)
    if arr.ndim != ndim:
        raise ValidationError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    check_costs(arr, name)
    arr.setflags(write=False)
    return arr


def _map_inf(values):
    if isinstance(values, str):
        return ext_cost(values)
    if isinstance(values, (list, tuple)):
        return [_map_inf(v) for v in values]
    return values


def check_costs(arr: np.ndarray, name: str) -> None:
    """Raise ValidationError naming the first NaN or negative entry of ``arr``."""
    bad = np.isnan(arr)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise ValidationError(f"NaN cost at {name}{list(idx)}")
    neg = arr < 0
    if neg.any():
        idx = tuple(int(i) for i in np.argwhere(neg)[0])
        raise ValidationError(f"negative cost at {name}{list(idx)}: {arr[idx]}")


@dataclass(frozen=True)
class HmmInstance:
    """Additive (negative log-probability) HMM.

    ``A[i, j]`` is the cost of moving from state ``i`` to state ``j`` and
    ``B[j, s]`` the cost of state ``j`` emitting symbol ``s``.
    """

    A: np.ndarray
    B: np.ndarray
    start_state: int = 0
    symbol_names: Optional[Mapping[int, str]] = None

    def __post_init__(self):
        A = cost_array(self.A, 2, "A")
        B = cost_array(self.B, 2, "B")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValidationError(f"A must be square, got shape {A.shape}")
        if n == 0:
            raise ValidationError("instance needs at least one state")
        if B.shape[0] != n:
            raise ValidationError(f"B has {B.shape[0]} rows, expected {n}")
        if B.shape[1] == 0:
            raise ValidationError("alphabet must be non-empty")
        if not 0 <= self.start_state < n:
            raise ValidationError(f"start_state {self.start_state} out of range [0, {n})")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def sigma(self) -> int:
        return self.B.shape[1]


@dataclass(frozen=True)
class WalkInstance:
    """Shortest length-``T`` walk from ``start_state`` under transition costs ``A``."""

    A: np.ndarray
    T: int
    start_state: int = 0

    def __post_init__(self):
        A = cost_array(self.A, 2, "A")
        object.__setattr__(self, "A", A)
        if A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise ValidationError(f"A must be square and non-empty, got shape {A.shape}")
        if self.T < 1:
            raise ValidationError(f"T must be >= 1, got {self.T}")
        if not 0 <= self.start_state < A.shape[0]:
            raise ValidationError(f"start_state {self.start_state} out of range")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def as_hmm(self) -> tuple[HmmInstance, np.ndarray]:
        """Unary-alphabet HMM with zero emissions plus the all-zero observation sequence."""
        hmm = HmmInstance(self.A, np.zeros((self.n, 1)), self.start_state)
        return hmm, np.zeros(self.T, dtype=np.int64)


def as_observations(obs: Sequence[int]) -> np.ndarray:
    arr = np.asarray(obs)
    if arr.ndim != 1:
        raise ValidationError("observation sequence must be one-dimensional")
    if arr.size and arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValidationError("observation ids must be integers")
    return arr.astype(np.int64)


def validate(instance: HmmInstance, obs: Sequence[int]) -> np.ndarray:
    """Check ``obs`` against ``instance`` and return it as an int64 array.

    Instance-level invariants (shapes, NaN, negative entries) are enforced when
    the instance is built; this re-checks them in case the arrays were swapped
    out from under a frozen dataclass and then checks every symbol id.
    """
    check_costs(instance.A, "A")
    check_costs(instance.B, "B")
    n, sigma = instance.n, instance.sigma
    if instance.A.shape != (n, n) or instance.B.shape[0] != n:
        raise ValidationError("dimension mismatch between A and B")
    arr = as_observations(obs)
    bad = (arr < 0) | (arr >= sigma)
    if bad.any():
        t = int(np.argmax(bad))
        raise ValidationError(
            f"symbol out of range at position {t}: {int(arr[t])} not in [0, {sigma})"
        )
    return arr


@dataclass(frozen=True)
class DecodeResult:
    path: tuple[int, ...]
    cost: float


@dataclass
class KPartiteGraph:
    """Complete k-partite graph with positive integer edge weights.

    ``cross_weights[(i, j)]`` (``i < j``) is an ``n_i x n_j`` integer matrix;
    entry ``[a, b]`` is the weight between vertex ``a`` of part ``i`` and
    vertex ``b`` of part ``j``.
    """

    part_sizes: tuple[int, ...]
    cross_weights: dict[tuple[int, int], np.ndarray] = field(repr=False)

    def __post_init__(self):
        self.part_sizes = tuple(int(s) for s in self.part_sizes)
        k = len(self.part_sizes)
        if k < 2:
            raise ValidationError(f"need at least 2 parts, got {k}")
        if any(s < 1 for s in self.part_sizes):
            raise ValidationError(f"every part needs a vertex: {self.part_sizes}")
        weights = {}
        for i in range(k):
            for j in range(i + 1, k):
                if (i, j) not in self.cross_weights:
                    raise ValidationError(f"missing weights for part pair {i}-{j}")
                w = np.asarray(self.cross_weights[(i, j)])
                shape = (self.part_sizes[i], self.part_sizes[j])
                if w.shape != shape:
                    raise ValidationError(f"weights {i}-{j} have shape {w.shape}, expected {shape}")
                if w.size and not np.all(np.equal(np.mod(w, 1), 0)):
                    raise ValidationError(f"weights {i}-{j} must be integers")
                w = w.astype(np.int64)
                if (w < 1).any():
                    a, b = np.argwhere(w < 1)[0]
                    raise ValidationError(f"non-positive weight at {i}-{j}[{a},{b}]: {w[a, b]}")
                w.setflags(write=False)
                weights[(i, j)] = w
        extra = set(self.cross_weights) - set(weights)
        if extra:
            raise ValidationError(f"unexpected part pairs {sorted(extra)}")
        self.cross_weights = weights

    @property
    def k(self) -> int:
        return len(self.part_sizes)

    def w(self, i: int, j: int) -> np.ndarray:
        """Weight matrix between parts ``i`` and ``j`` in either orientation."""
        if i < j:
            return self.cross_weights[(i, j)]
        return self.cross_weights[(j, i)].T

    def max_weight(self) -> int:
        return int(max(w.max() for w in self.cross_weights.values()))

    def clique_weight(self, tup: Sequence[int]) -> int:
        """Total weight of the clique picking vertex ``tup[i]`` from part ``i``."""
        total = 0
        for i in range(self.k):
            for j in range(i + 1, self.k):
                total += int(self.cross_weights[(i, j)][tup[i], tup[j]])
        return total

    def edge_count(self) -> int:
        return sum(w.size for w in self.cross_weights.values())


@dataclass(frozen=True)
class ReductionOutput:
    """Reduced instance plus what is needed to map its optimum back.

    ``recovered = decoded_cost - cost_offset``.  ``witness_map`` maps state
    ids to ``(part, vertex)`` pairs of the source graph.
    """

    instance: HmmInstance | WalkInstance
    observations: Optional[np.ndarray]
    cost_offset: float
    witness_map: dict[int, tuple[int, int]]
    layout: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
