"""Classic Viterbi dynamic program over additive costs, plus its checkers.

Tie-breaking everywhere is "smallest state index wins" applied the way
back-pointer recovery applies it: the final state is the smallest index
attaining the optimum, and each back pointer is the smallest predecessor
attaining the minimum.  Among all optimal paths this selects the one that is
smallest when read from the last state backwards, which is the order
:func:`brute_force_decode` uses too.

All sums are left folds in time order,
``((A(u0,u1) + B(u1,s1)) + A(u1,u2)) + B(u2,s2) ...``, so the DP value,
:func:`path_cost` and the exhaustive oracle agree bit for bit even for
non-integer costs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import INF, DecodeResult, HmmInstance, ValidationError, validate

# elements per candidate block in the DP inner step
_BLOCK = 1 << 22

BRUTE_FORCE_BUDGET = 10_000_000


def start_vector(n: int, start_state: int) -> np.ndarray:
    z = np.full(n, INF)
    z[start_state] = 0.0
    return z


def _relax(v: np.ndarray, A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``out[j] = min_i v[i] + A[i, j]`` with the smallest minimizing ``i``."""
    n_in, n_out = A.shape
    if n_in * n_out <= _BLOCK:
        cand = v[:, None] + A
        arg = np.argmin(cand, axis=0)
        return cand[arg, np.arange(n_out)], arg
    out = np.empty(n_out)
    arg = np.empty(n_out, dtype=np.int64)
    step = max(1, _BLOCK // n_in)
    for c in range(0, n_out, step):
        cand = v[:, None] + A[:, c:c + step]
        a = np.argmin(cand, axis=0)
        arg[c:c + step] = a
        out[c:c + step] = cand[a, np.arange(cand.shape[1])]
    return out, arg


def forward_vectors(instance: HmmInstance, obs: Sequence[int]) -> list[np.ndarray]:
    """The chain ``v_0 = z``, ``v_t = relax(v_{t-1}) + B[:, s_t]`` for ``t = 1..T``.

    ``v_t[j]`` is the cheapest cost of being in state ``j`` after emitting the
    first ``t`` observations.
    """
    obs = validate(instance, obs)
    v = start_vector(instance.n, instance.start_state)
    chain = [v]
    for s in obs:
        v, _ = _relax(v, instance.A)
        v = v + instance.B[:, s]
        chain.append(v)
    return chain


def backtrack(final: np.ndarray, pointers: Sequence[np.ndarray], start_state: int) -> tuple[int, ...]:
    state = int(np.argmin(final))
    path = [state]
    for bp in reversed(pointers):
        state = int(bp[state])
        path.append(state)
    path[-1] = start_state
    return tuple(reversed(path))


def viterbi_decode(instance: HmmInstance, obs: Sequence[int]) -> DecodeResult:
    """Minimum-cost state path for ``obs`` starting at ``instance.start_state``.

    Returns a path of ``T + 1`` states (the first one being the start state)
    and its cost.  A cost of ``inf`` means no finite path exists.
    """
    obs = validate(instance, obs)
    if obs.size == 0:
        raise ValidationError("observation sequence must be non-empty")
    v = start_vector(instance.n, instance.start_state)
    pointers = []
    for s in obs:
        v, arg = _relax(v, instance.A)
        v = v + instance.B[:, s]
        pointers.append(arg)
    path = backtrack(v, pointers, instance.start_state)
    return DecodeResult(path, float(v[path[-1]]))


def path_cost(instance: HmmInstance, obs: Sequence[int], path: Sequence[int]) -> float:
    obs = validate(instance, obs)
    path = list(path)
    if len(path) != len(obs) + 1:
        raise ValidationError(f"path has {len(path)} states, expected {len(obs) + 1}")
    for t, u in enumerate(path):
        if not 0 <= u < instance.n:
            raise ValidationError(f"state {u} at position {t} out of range [0, {instance.n})")
    if path[0] != instance.start_state:
        raise ValidationError(f"path starts at {path[0]}, expected {instance.start_state}")
    total = 0.0
    for t, s in enumerate(obs, start=1):
        total = total + float(instance.A[path[t - 1], path[t]])
        total = total + float(instance.B[path[t], s])
    return total


def brute_force_decode(instance: HmmInstance, obs: Sequence[int],
                       budget: int = BRUTE_FORCE_BUDGET) -> DecodeResult:
    """Enumerate all ``n**T`` paths.

    Ties go to the path that is smallest when compared from its last state
    backwards (the same choice :func:`viterbi_decode` makes).
    """
    obs = validate(instance, obs)
    n, T = instance.n, len(obs)
    if T == 0:
        raise ValidationError("observation sequence must be non-empty")
    if n ** T > budget:
        raise ValidationError(f"{n}**{T} paths exceed the brute-force budget {budget}")
    A, B = instance.A, instance.B
    # axis t-1 of `cost` indexes u_t
    cost = A[instance.start_state] + B[:, obs[0]]
    for s in obs[1:]:
        cost = cost[..., :, None] + A
        cost = cost + B[:, s]
    rev = cost.transpose(tuple(range(T - 1, -1, -1)))
    flat = int(np.argmin(rev))
    idx = np.unravel_index(flat, rev.shape)
    path = (instance.start_state,) + tuple(int(i) for i in reversed(idx))
    return DecodeResult(path, float(rev[idx]))


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certificate check; ``t``/``index`` locate the first violation."""

    accepted: bool
    reason: str = ""
    t: Optional[int] = None
    index: Optional[int] = None

    def __bool__(self):
        return self.accepted


def verify_cost_certificate(instance: HmmInstance, obs: Sequence[int],
                            vectors: Sequence[Sequence[float]], threshold: float) -> Verdict:
    """Check a claimed forward-vector chain and that its optimum exceeds ``threshold``.

    Accepts iff ``vectors[0]`` is the start vector, every
    ``vectors[t] == relax(vectors[t-1]) + B[:, s_t]`` exactly, and
    ``min(vectors[T]) > threshold``.
    """
    obs = validate(instance, obs)
    T, n = len(obs), instance.n
    if len(vectors) != T + 1:
        raise ValidationError(f"certificate has {len(vectors)} vectors, expected {T + 1}")
    vecs = []
    for t, vec in enumerate(vectors):
        arr = np.asarray(vec, dtype=np.float64)
        if arr.shape != (n,):
            raise ValidationError(f"certificate vector {t} has shape {arr.shape}, expected ({n},)")
        vecs.append(arr)

    expected = start_vector(n, instance.start_state)
    for t in range(T + 1):
        if t > 0:
            expected, _ = _relax(vecs[t - 1], instance.A)
            expected = expected + instance.B[:, obs[t - 1]]
        wrong = vecs[t] != expected
        if wrong.any():
            i = int(np.argmax(wrong))
            what = "start vector mismatch" if t == 0 else "recurrence violated"
            return Verdict(False, f"{what} at t={t} index={i}", t, i)
    best = float(vecs[T].min())
    if not best > threshold:
        return Verdict(False, f"min entry not above threshold: {best} <= {threshold}", T, None)
    return Verdict(True, f"min entry {best} > {threshold}")
