"""Constructive reductions from min-weight triangle / k-clique to Viterbi and shortest walk,
plus the instance transforms (stochastic normalization, sparse padding, k-partite splitting).

Every reduction returns a :class:`~vhl.core.ReductionOutput`; decoding its
instance and subtracting ``cost_offset`` gives the source optimum exactly, and
:func:`recover_witness` maps the decoded path back to source vertices.

State ids for the triangle reduction::

    0 = start node, 1 = sink node, then V1 block, then V2 block
    symbols: U block, then BOT, then BOT_F

For the k-clique reduction (``p = k - 2`` parts U_1..U_p)::

    0 = start, 1 = collector, 2 = sink, V1, V2,
    a(v, i) for v in V1 (row-major, p per vertex), b(v, i) for v in V2, c_1..c_Z
    symbols: U_1 block, ..., U_p block, BOT, BOT0, BOT1, BOT_F
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import (
    INF, HmmInstance, KPartiteGraph, ReductionOutput, ValidationError, WalkInstance,
)


def _block(start: int, size: int) -> range:
    return range(start, start + size)


# -- triangle -> Viterbi --------------------------------------------------------

def triangle_to_viterbi(G: KPartiteGraph) -> ReductionOutput:
    """Viterbi instance whose optimum equals the minimum triangle weight of ``G``.

    ``G`` has parts ``(V1, V2, U)``.  The optimal path idles in the start node,
    spends the two copies of some observation ``u`` in ``V1`` then ``V2``, and
    reaches the sink on the following BOT.
    """
    if G.k != 3:
        raise ValidationError(f"triangle reduction needs 3 parts, got {G.k}")
    n1, n2, m = G.part_sizes
    V1 = _block(2, n1)
    V2 = _block(2 + n1, n2)
    N = 2 + n1 + n2
    bot, bot_f = m, m + 1
    sigma = m + 2

    A = np.full((N, N), INF)
    A[0, 0] = 0
    A[0, V1.start:V1.stop] = 0
    A[V1.start:V1.stop, V2.start:V2.stop] = G.w(0, 1)
    A[V2.start:V2.stop, 1] = 0
    A[1, 1] = 0

    B = np.zeros((N, sigma))
    B[0, bot_f] = INF
    B[V1.start:V1.stop, :m] = G.w(0, 2)
    B[V2.start:V2.stop, :m] = G.w(1, 2)
    B[V1.start:V2.stop, bot] = INF
    B[V1.start:V2.stop, bot_f] = INF

    obs = []
    for u in range(m):
        obs += [u, u, bot]
    obs.append(bot_f)

    names = {u: f"u{u}" for u in range(m)}
    names.update({bot: "BOT", bot_f: "BOT_F"})
    witness = {s: (0, i) for i, s in enumerate(V1)}
    witness.update({s: (1, j) for j, s in enumerate(V2)})
    layout = {
        "start": 0, "sink": 1,
        "V1": [V1.start, V1.stop], "V2": [V2.start, V2.stop],
        "U_symbols": [0, m], "BOT": bot, "BOT_F": bot_f,
    }
    return ReductionOutput(
        HmmInstance(A, B, 0, names), np.array(obs, dtype=np.int64), 0.0, witness,
        layout, {"reduction": "triangle-viterbi", "T": len(obs), "sigma": sigma, "states": N},
    )


# -- k-clique -> Viterbi --------------------------------------------------------

def clique_bits(W: int, Z: int) -> list[int]:
    """The ``Z`` binary digits of ``W``, least significant first."""
    if W < 0 or W >= 1 << Z:
        raise ValidationError(f"weight {W} does not fit in {Z} bits")
    return [(W >> i) & 1 for i in range(Z)]


def default_bit_count(G: KPartiteGraph) -> int:
    """Smallest ``Z`` with ``2**Z > k**2 * max_weight``."""
    bound = G.k ** 2 * G.max_weight()
    return math.ceil(math.log2(bound + 1))


def kclique_to_viterbi(G: KPartiteGraph, Z: Optional[int] = None) -> ReductionOutput:
    """Viterbi instance whose optimum equals the minimum k-clique weight of ``G``.

    Parts are ``(V1, V2, U_1, ..., U_p)`` with ``p = k - 2 >= 1``.  Each tuple
    of ``U_1 x ... x U_p`` (in lexicographic order) gets a block of ``Z + 2k``
    observations; the weight of the tuple's own clique is spelled out in
    binary over the ``c`` chain.
    """
    k = G.k
    if k < 3:
        raise ValidationError(f"k-clique reduction needs k >= 3, got {k}")
    p = k - 2
    n1, n2 = G.part_sizes[:2]
    ms = G.part_sizes[2:]
    if Z is None:
        Z = default_bit_count(G)
    # any clique weighs at most the sum of the per-pair maxima
    loose = sum(int(w.max()) for w in G.cross_weights.values())
    if Z < 1 or (1 << Z) <= loose:
        raise ValidationError(f"2**{Z} does not exceed the clique weight bound {loose}")

    V1 = _block(3, n1)
    V2 = _block(V1.stop, n2)
    a0 = V2.stop
    b0 = a0 + n1 * p
    c0 = b0 + n2 * p
    N = c0 + Z

    def a(v, i):
        return a0 + v * p + i

    def b(v, i):
        return b0 + v * p + i

    u_off = np.concatenate([[0], np.cumsum(ms)]).astype(int)
    M = int(u_off[-1])
    bot, bot0, bot1, bot_f = M, M + 1, M + 2, M + 3
    sigma = M + 4

    A = np.full((N, N), INF)
    A[0, 0] = 0
    A[2, 2] = 0
    for v in range(n1):
        A[0, a(v, 0)] = 0
        for i in range(p - 1):
            A[a(v, i), a(v, i + 1)] = 0
        A[a(v, p - 1), V1[v]] = 0
    A[V1.start:V1.stop, V2.start:V2.stop] = G.w(0, 1)
    for v in range(n2):
        A[V2[v], b(v, 0)] = 0
        for i in range(p - 1):
            A[b(v, i), b(v, i + 1)] = 0
        A[b(v, p - 1), 1] = 0
    A[1, c0] = 0
    for i in range(Z - 1):
        A[c0 + i, c0 + i + 1] = 0
    A[c0 + Z - 1, 2] = 0

    B = np.zeros((N, sigma))
    for i in range(p):
        cols = slice(u_off[i], u_off[i + 1])
        for v in range(n1):
            B[a(v, i), cols] = G.w(0, 2 + i)[v]
        for v in range(n2):
            B[b(v, i), cols] = G.w(1, 2 + i)[v]
    for i in range(Z):
        B[c0 + i, bot1] = 2 ** i
    B[:, bot] = INF
    B[0, bot] = 0
    B[2, bot] = 0
    B[:, bot_f] = INF
    B[2, bot_f] = 0

    obs = []
    for tup in itertools.product(*(range(m) for m in ms)):
        syms = [int(u_off[i]) + u for i, u in enumerate(tup)]
        W = sum(int(G.w(2 + i, 2 + j)[tup[i], tup[j]])
                for i in range(p) for j in range(i + 1, p))
        obs += syms + [bot0, bot0] + syms + [bot0]
        obs += [bot1 if bit else bot0 for bit in clique_bits(W, Z)]
        obs.append(bot)
    obs.append(bot_f)

    names = {}
    for i in range(p):
        for u in range(ms[i]):
            names[int(u_off[i]) + u] = f"u{i + 1}.{u}"
    names.update({bot: "BOT", bot0: "BOT0", bot1: "BOT1", bot_f: "BOT_F"})
    witness = {s: (0, v) for v, s in enumerate(V1)}
    witness.update({s: (1, v) for v, s in enumerate(V2)})
    layout = {
        "start": 0, "collector": 1, "sink": 2,
        "V1": [V1.start, V1.stop], "V2": [V2.start, V2.stop],
        "a": [a0, b0], "b": [b0, c0], "c": [c0, N],
        "U_symbols": [[int(u_off[i]), int(u_off[i + 1])] for i in range(p)],
        "BOT": bot, "BOT0": bot0, "BOT1": bot1, "BOT_F": bot_f,
        "p": p, "Z": Z,
    }
    params = {"reduction": "kclique-viterbi", "k": k, "p": p, "Z": Z,
              "T": len(obs), "sigma": sigma, "states": N}
    return ReductionOutput(HmmInstance(A, B, 0, names), np.array(obs, dtype=np.int64),
                           0.0, witness, layout, params)


# -- triangle -> shortest walk --------------------------------------------------

def triangle_to_walk(G: KPartiteGraph) -> ReductionOutput:
    """Shortest-walk instance (``T = m + 4``) encoding the minimum triangle of ``G``.

    Uses the non-negative form: the edge into the sink weighs 0 and every
    other edge carries an extra ``C = 1 + T * max_weight``, so the optimum is
    ``(T - 1) * C + min_triangle``.
    """
    if G.k != 3:
        raise ValidationError(f"walk reduction needs 3 parts, got {G.k}")
    n1, n2, m = G.part_sizes
    T = m + 4
    C = 1 + T * G.max_weight()
    V1 = _block(2, n1)
    V2 = _block(V1.stop, n2)
    U = _block(V2.stop, m)
    Up = _block(U.stop, m)
    N = Up.stop

    A = np.full((N, N), INF)
    A[0, U[0]] = C
    for i in range(m - 1):
        A[U[i], U[i + 1]] = C
        A[Up[i], Up[i + 1]] = C
    A[U.start:U.stop, V1.start:V1.stop] = C + G.w(2, 0)
    A[V1.start:V1.stop, V2.start:V2.stop] = C + G.w(0, 1)
    A[V2.start:V2.stop, Up.start:Up.stop] = C + G.w(1, 2)
    A[Up[m - 1], 1] = 0

    witness = {s: (0, i) for i, s in enumerate(V1)}
    witness.update({s: (1, j) for j, s in enumerate(V2)})
    witness.update({s: (2, u) for u, s in enumerate(U)})
    witness.update({s: (2, u) for u, s in enumerate(Up)})
    layout = {"start": 0, "sink": 1, "V1": [V1.start, V1.stop], "V2": [V2.start, V2.stop],
              "U": [U.start, U.stop], "U_prime": [Up.start, Up.stop]}
    params = {"reduction": "triangle-walk", "T": T, "C": C, "states": N,
              "T_within_states": T <= N}
    return ReductionOutput(WalkInstance(A, T, 0), None, float((T - 1) * C), witness, layout, params)


# -- witness recovery -----------------------------------------------------------

def recover_witness(out: ReductionOutput, path: Sequence[int]) -> tuple[int, ...]:
    """Source-graph vertex tuple (one vertex per part) visited by a decoded path."""
    kind = out.params["reduction"]
    path = list(path)
    if kind == "triangle-viterbi":
        lo, hi = out.layout["V1"]
        t = next(t for t, s in enumerate(path) if lo <= s < hi)
        v1 = out.witness_map[path[t]][1]
        v2 = out.witness_map[path[t + 1]][1]
        return (v1, v2, int(out.observations[t - 1]))
    if kind == "kclique-viterbi":
        lo, hi = out.layout["a"]
        p = out.layout["p"]
        t0 = next(t for t, s in enumerate(path) if lo <= s < hi)
        v1 = out.witness_map[path[t0 + p]][1]
        v2 = out.witness_map[path[t0 + p + 1]][1]
        us = []
        for i, (ulo, _) in enumerate(out.layout["U_symbols"]):
            us.append(int(out.observations[t0 - 1 + i]) - ulo)
        return (v1, v2, *us)
    if kind == "triangle-walk":
        lo, hi = out.layout["V1"]
        t = next(t for t, s in enumerate(path) if lo <= s < hi)
        v1 = out.witness_map[path[t]][1]
        v2 = out.witness_map[path[t + 1]][1]
        u = out.witness_map[path[t + 2]][1]
        return (v1, v2, u)
    raise ValidationError(f"unknown reduction {kind!r}")


# -- splitting a general graph into k-partite pieces -----------------------------

@dataclass(frozen=True)
class SplitPiece:
    graph: KPartiteGraph
    vertices: tuple[tuple[int, ...], ...]  # original vertex per part slot, -1 for padding


def kclique_split(weights: np.ndarray, sizes: Sequence[int]) -> Iterator[SplitPiece]:
    """Cover all k-cliques of a complete weighted graph with k-partite subinstances.

    Part ``i`` ranges over the blocks of a partition of the vertices into
    groups of ``sizes[i]``; every combination of blocks yields one piece.  When
    a size does not divide the vertex count the graph is padded with vertices
    whose edges weigh ``k**2 * max_weight + 1``; the same heavy weight stands
    in for the non-edge between a vertex and itself when blocks overlap.
    Neither can appear in a minimum clique.
    """
    weights = np.asarray(weights)
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ValidationError("weights must be a square matrix")
    N = weights.shape[0]
    k = len(sizes)
    if k < 3:
        raise ValidationError(f"need k >= 3 parts, got {k}")
    if N < k:
        raise ValidationError(f"a {N}-vertex graph has no {k}-clique")
    if any(s < 1 or s > N for s in sizes):
        raise ValidationError(f"part sizes {list(sizes)} infeasible for {N} vertices")
    off = ~np.eye(N, dtype=bool)
    if (weights[off] < 1).any() or not np.array_equal(weights, weights.T):
        raise ValidationError("weights must be symmetric with positive off-diagonal entries")
    heavy = k * k * int(weights[off].max()) + 1

    lcm = math.lcm(*sizes)
    Np = -(-N // lcm) * lcm
    full = np.full((Np, Np), heavy, dtype=np.int64)
    full[:N, :N] = weights
    np.fill_diagonal(full, heavy)
    label = np.arange(Np)
    label[N:] = -1

    partitions = [[np.arange(b, b + s) for b in range(0, Np, s)] for s in sizes]
    for blocks in itertools.product(*partitions):
        cross = {}
        for i in range(k):
            for j in range(i + 1, k):
                cross[(i, j)] = full[np.ix_(blocks[i], blocks[j])]
        yield SplitPiece(KPartiteGraph(tuple(sizes), cross),
                         tuple(tuple(int(x) for x in label[b]) for b in blocks))


# -- additive -> stochastic ------------------------------------------------------

@dataclass(frozen=True)
class StochasticHmm:
    """Row-stochastic transition and emission matrices plus how values map back.

    ``additive value = scale * (normalized value - shift)``.
    """

    trans: np.ndarray
    emit: np.ndarray
    start_state: int
    shift: float
    scale: float = 1.0
    extra_states: tuple[int, ...] = ()
    extra_symbols: tuple[int, ...] = ()

    def cost_instance(self) -> HmmInstance:
        """Negative natural-log costs of this model (probability 0 becomes inf)."""
        with np.errstate(divide="ignore"):
            A = -np.log(self.trans)
            B = -np.log(self.emit)
        # -log(1) is -0.0; keep costs non-negative
        return HmmInstance(np.abs(A), np.abs(B), self.start_state)


def _clamp_remainder(rest: np.ndarray) -> np.ndarray:
    return np.where(rest < 0, 0.0, rest)


def normalize_to_stochastic(instance: HmmInstance, T: int) -> StochasticHmm:
    """Turn an additive instance into a proper HMM for sequences of length ``T``.

    Transition costs are shifted by ``ln n`` and emission costs by ``ln T`` so
    every row's probability mass is at most 1; the leftover goes to an extra
    absorbing state emitting only an extra symbol.  For observation sequences
    not using that symbol the optimal path is unchanged and its value grows by
    ``T ln n + T ln T``.
    """
    n, sigma = instance.n, instance.sigma
    if T < 1:
        raise ValidationError(f"T must be >= 1, got {T}")
    if sigma > T:
        raise ValidationError(f"alphabet size {sigma} exceeds T={T}; emission rows would overflow")
    alpha, gamma = n, sigma
    P = np.exp(-(instance.A + math.log(n)))
    E = np.exp(-(instance.B + math.log(T)))

    trans = np.zeros((n + 1, n + 1))
    trans[:n, :n] = P
    trans[:n, alpha] = _clamp_remainder(1.0 - P.sum(axis=1))
    trans[alpha, alpha] = 1.0
    emit = np.zeros((n + 1, sigma + 1))
    emit[:n, :sigma] = E
    emit[:n, gamma] = _clamp_remainder(1.0 - E.sum(axis=1))
    emit[alpha, gamma] = 1.0
    shift = T * math.log(n) + T * math.log(T)
    return StochasticHmm(trans, emit, instance.start_state, shift, 1.0, (alpha,), (gamma,))


def normalize_walk_unary(w: WalkInstance, scale: Optional[float] = None) -> StochasticHmm:
    """Proper single-symbol HMM for a walk instance, without adding a symbol.

    Costs are divided by ``scale`` (default: the largest finite cost) and
    shifted by ``ln n``; the leftover mass of each original state is spread
    evenly over a clique of ``4n`` extra states whose internal transitions all
    have probability ``1/(4n)``.  Requires positive finite costs and at least
    one finite transition out of every state, which keeps the clique off every
    optimal walk.
    """
    A = w.A
    n = w.n
    finite = np.isfinite(A)
    if (A[finite] <= 0).any():
        i, j = np.argwhere(finite & (A <= 0))[0]
        raise ValidationError(f"non-positive weight at A[{i},{j}]")
    if not finite.any(axis=1).all():
        i = int(np.argmin(finite.any(axis=1)))
        raise ValidationError(f"state {i} has no finite outgoing transition")
    if scale is None:
        scale = float(A[finite].max())
    if scale <= 0 or (A[finite] > scale).any():
        raise ValidationError(f"scale {scale} must bound every finite cost")
    q = 4 * n
    P = np.exp(-(A / scale + math.log(n)))
    trans = np.zeros((n + q, n + q))
    trans[:n, :n] = P
    rest = _clamp_remainder(1.0 - P.sum(axis=1))
    trans[:n, n:] = (rest / q)[:, None]
    trans[n:, n:] = 1.0 / q
    emit = np.ones((n + q, 1))
    return StochasticHmm(trans, emit, w.start_state, w.T * math.log(n), scale,
                         tuple(range(n, n + q)), ())


# -- sparse padding ---------------------------------------------------------------

def pad_sparse(instance: HmmInstance, n_target: int) -> HmmInstance:
    """Add unreachable states with zero-cost self-loops until there are ``n_target``."""
    n = instance.n
    if n_target < n:
        raise ValidationError(f"n_target {n_target} is below the current {n} states")
    A = np.full((n_target, n_target), INF)
    A[:n, :n] = instance.A
    extra = np.arange(n, n_target)
    A[extra, extra] = 0
    B = np.zeros((n_target, instance.sigma))
    B[:n] = instance.B
    return HmmInstance(A, B, instance.start_state, instance.symbol_names)
