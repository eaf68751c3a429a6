"""Tropical (min, +) products and the few-distinct-values online MV algorithm.

The fast product splits a cost matrix into one 0/inf mask per distinct finite
value.  For each mask, a query vector's indices are sorted by value and cut
into ``p`` buckets; a Boolean matrix-vector product against each bucket's
indicator tells which output rows see a finite entry in that bucket, and
those rows are filled from that bucket alone.  Buckets are visited in
increasing value order, so a row filled once never changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .core import INF, DecodeResult, HmmInstance, ValidationError, WalkInstance, validate
from .viterbi import backtrack, start_vector, viterbi_decode

_BLOCK = 1 << 22


def mv_minplus(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``u[i] = min_j A[i, j] + v[j]``."""
    A = np.asarray(A, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if A.ndim != 2 or v.shape != (A.shape[1],):
        raise ValidationError(f"cannot multiply {A.shape} matrix with {v.shape} vector")
    rows, cols = A.shape
    if cols == 0:
        return np.full(rows, INF)
    out = np.empty(rows)
    step = max(1, _BLOCK // max(cols, 1))
    for r in range(0, rows, step):
        out[r:r + step] = (A[r:r + step] + v).min(axis=1)
    return out


def mm_minplus(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Naive cubic tropical matrix product ``C[i, j] = min_k A[i, k] + B[k, j]``."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValidationError(f"cannot multiply {A.shape} with {B.shape}")
    n, m = A.shape
    q = B.shape[1]
    if m == 0:
        return np.full((n, q), INF)
    out = np.empty((n, q))
    step = max(1, _BLOCK // max(m * q, 1))
    for r in range(0, n, step):
        out[r:r + step] = (A[r:r + step, :, None] + B[None, :, :]).min(axis=1)
    return out


def tropical_identity(n: int) -> np.ndarray:
    eye = np.full((n, n), INF)
    np.fill_diagonal(eye, 0.0)
    return eye


class Substrate(str, Enum):
    NAIVE = "naive"
    BITPACKED = "bitpacked"


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a bool array into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=bool)
    nbits = bits.shape[-1]
    nwords = max(1, -(-nbits // 64))
    padded = np.zeros(bits.shape[:-1] + (nwords * 64,), dtype=bool)
    padded[..., :nbits] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8")


def _unpack(words: np.ndarray, nbits: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, axis=-1, count=nbits, bitorder="little").astype(bool)


class BitMatrix:
    """Row-major bit matrix, each row packed into 64-bit words (padding bits zero).

    A column-packed copy (the packed rows of the transpose) is built lazily for
    products against sparse indicator vectors.
    """

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValidationError("BitMatrix needs a 2-d array")
        self.rows, self.cols = bits.shape
        self.words = _pack(bits)
        self._bool = bits.copy()
        self._bool.setflags(write=False)
        self._cols_packed = None

    @property
    def bits(self) -> np.ndarray:
        """Unpacked read-only bool view."""
        return self._bool

    @property
    def column_words(self) -> np.ndarray:
        if self._cols_packed is None:
            self._cols_packed = _pack(self._bool.T)
        return self._cols_packed

    def get(self, i: int, j: int) -> bool:
        return bool((int(self.words[i, j // 64]) >> (j % 64)) & 1)

    def count(self) -> int:
        return int(self._bool.sum())

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.words, other.words)

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols}, {self.count()} set)"


def bool_mv(M: BitMatrix, x: np.ndarray, substrate: Substrate | str = Substrate.BITPACKED) -> np.ndarray:
    """Boolean product: ``out[i] = OR_j (M[i, j] AND x[j])``."""
    x = np.asarray(x, dtype=bool)
    if x.shape != (M.cols,):
        raise ValidationError(f"bit vector of length {x.shape} for {M.rows}x{M.cols} matrix")
    substrate = Substrate(substrate)
    if substrate is Substrate.NAIVE:
        return (M.bits & x).any(axis=1)
    # OR together the packed columns selected by x
    sel = np.flatnonzero(x)
    if sel.size == 0:
        return np.zeros(M.rows, dtype=bool)
    acc = np.bitwise_or.reduce(M.column_words[sel], axis=0)
    return _unpack(acc, M.rows)


@dataclass(frozen=True)
class DistinctValueDecomposition:
    """``A`` as ``values[k]`` plus bit mask ``masks[k]`` marking where ``A == values[k]``.

    Infinite entries belong to no mask.
    """

    n: int
    values: np.ndarray
    masks: tuple[BitMatrix, ...]

    @property
    def d(self) -> int:
        return len(self.values)


def decompose(A: np.ndarray) -> DistinctValueDecomposition:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"decompose needs a square matrix, got {A.shape}")
    values = np.unique(A[np.isfinite(A)])
    masks = tuple(BitMatrix(A == a) for a in values)
    for mask in masks:
        mask.column_words  # pack once here rather than inside the first query
    values = values.copy()
    values.setflags(write=False)
    return DistinctValueDecomposition(A.shape[0], values, masks)


def reconstruct(decomp: DistinctValueDecomposition) -> np.ndarray:
    A = np.full((decomp.n, decomp.n), INF)
    for a, mask in zip(decomp.values, decomp.masks):
        A[mask.bits] = a
    return A


def auto_bucket_count(n: int) -> int:
    return max(1, round(2 ** (math.sqrt(math.log2(max(n, 1))) / 2)))


def distinct_value_bound(n: int, eps: float = 1.0) -> float:
    """``2**(eps * sqrt(log2 n))``: the distinct-value regime the fast product targets."""
    return 2 ** (eps * math.sqrt(math.log2(max(n, 2))))


@dataclass(frozen=True)
class OmvConfig:
    """``bucket_count_p=None`` selects :func:`auto_bucket_count`."""

    bucket_count_p: Optional[int] = None
    substrate: Substrate = Substrate.BITPACKED

    def __post_init__(self):
        object.__setattr__(self, "substrate", Substrate(self.substrate))
        if self.bucket_count_p is not None and self.bucket_count_p < 1:
            raise ValidationError(f"bucket count must be positive, got {self.bucket_count_p}")

    def buckets(self, n: int) -> int:
        if self.bucket_count_p is None:
            return min(auto_bucket_count(n), max(n, 1))
        if self.bucket_count_p > max(n, 1):
            raise ValidationError(f"bucket count {self.bucket_count_p} exceeds dimension {n}")
        return self.bucket_count_p


def _mask_query(mask: BitMatrix, v: np.ndarray, order: np.ndarray, p: int,
                substrate: Substrate, trace: Optional[list], k: int):
    n = mask.rows
    size = -(-n // p)
    r = np.full(n, INF)
    arg = np.full(n, -1, dtype=np.int64)
    unfilled = np.ones(n, dtype=bool)
    last = -INF
    indicator = np.zeros(n, dtype=bool)
    for b in range(p):
        S = order[b * size:(b + 1) * size]
        if S.size == 0 or v[S[0]] == INF:
            # every remaining candidate is inf: leave those rows unfilled (inf, no argmin)
            break
        indicator[S] = True
        hit = bool_mv(mask, indicator, substrate)
        indicator[S] = False
        rows = np.flatnonzero(hit & unfilled)
        if rows.size == 0:
            continue
        # S is sorted by (value, index), so the first set bit is the row minimum
        first = np.argmax(mask.bits[np.ix_(rows, S)], axis=1)
        cols = S[first]
        vals = v[cols]
        commit = np.lexsort((rows, vals))
        rows, cols, vals = rows[commit], cols[commit], vals[commit]
        assert vals[0] >= last, "fill order violated: value decreased across buckets"
        assert unfilled[rows].all(), "row filled twice"
        last = vals[-1]
        r[rows] = vals
        arg[rows] = cols
        unfilled[rows] = False
        if trace is not None:
            trace.extend((k, int(j), float(x)) for j, x in zip(rows, vals))
        if not unfilled.any():
            break
    # entries reached only through inf candidates carry no argmin
    arg[r == INF] = -1
    return r, arg


def omv_query(decomp: DistinctValueDecomposition, v: np.ndarray, cfg: OmvConfig = OmvConfig(),
              trace: Optional[list] = None) -> tuple[np.ndarray, np.ndarray]:
    """Tropical product ``A (+) v`` of the decomposed matrix with one query vector.

    Returns ``(values, argmins)``.  ``argmins[j]`` is the smallest column index
    attaining ``values[j]``, or ``-1`` when ``values[j]`` is infinite.  If
    ``trace`` is a list, each fill is appended as ``(mask, row, value)`` in
    commit order.
    """
    v = np.asarray(v, dtype=np.float64)
    n = decomp.n
    if v.shape != (n,):
        raise ValidationError(f"query vector has shape {v.shape}, expected ({n},)")
    if decomp.d == 0:
        return np.full(n, INF), np.full(n, -1, dtype=np.int64)
    p = cfg.buckets(n)
    order = np.argsort(v, kind="stable")
    stacked = np.empty((decomp.d, n))
    args = np.empty((decomp.d, n), dtype=np.int64)
    for k, (a, mask) in enumerate(zip(decomp.values, decomp.masks)):
        r, arg = _mask_query(mask, v, order, p, cfg.substrate, trace, k)
        stacked[k] = a + r
        args[k] = arg
    best = stacked.min(axis=0)
    tied = np.where((stacked == best) & (args >= 0), args, n)
    argmins = tied.min(axis=0)
    argmins[best == INF] = -1
    return best, argmins


def fast_viterbi(instance: HmmInstance, obs: Sequence[int], cfg: OmvConfig = OmvConfig()) -> DecodeResult:
    """Viterbi decoding with every relaxation step done by :func:`omv_query`.

    Produces the same cost and path as :func:`vhl.viterbi.viterbi_decode`.
    """
    obs = validate(instance, obs)
    if obs.size == 0:
        raise ValidationError("observation sequence must be non-empty")
    # relaxation reads columns of A: out[j] = min_i A[i, j] + v[i]
    decomp = decompose(instance.A.T)
    v = start_vector(instance.n, instance.start_state)
    pointers = []
    for s in obs:
        v, arg = omv_query(decomp, v, cfg)
        v = v + instance.B[:, s]
        # inf entries have no argmin; the classic DP points those at state 0
        pointers.append(np.where(arg < 0, 0, arg))
    path = backtrack(v, pointers, instance.start_state)
    return DecodeResult(path, float(v[path[-1]]))


def walk_solve_dp(w: WalkInstance) -> DecodeResult:
    hmm, obs = w.as_hmm()
    return viterbi_decode(hmm, obs)


def minplus_power(A: np.ndarray, T: int) -> np.ndarray:
    """``A`` raised to the ``T``-th tropical power by repeated squaring (``T >= 1``)."""
    if T < 1:
        raise ValidationError(f"exponent must be >= 1, got {T}")
    result = None
    base = np.asarray(A, dtype=np.float64)
    while T:
        if T & 1:
            result = base if result is None else mm_minplus(result, base)
        T >>= 1
        if T:
            base = mm_minplus(base, base)
    return result


def walk_solve_squaring(w: WalkInstance) -> float:
    """Optimal walk cost from ``O(log T)`` tropical matrix products (no path).

    Equal to :func:`walk_solve_dp` whenever partial sums are exact (e.g.
    integer costs); squaring reassociates the additions.
    """
    P = minplus_power(w.A, w.T)
    return float(P[w.start_state].min())
