import numpy as np
import pytest
from hypothesis import given, strategies as st

from vhl.core import INF, ValidationError, WalkInstance
from vhl.generate import random_cost_matrix, random_hmm, rng_for
from vhl.minplus import (
    BitMatrix, OmvConfig, Substrate, auto_bucket_count, bool_mv, decompose, distinct_value_bound,
    fast_viterbi, minplus_power, mm_minplus, mv_minplus, omv_query, reconstruct,
    tropical_identity, walk_solve_dp, walk_solve_squaring,
)
from vhl.viterbi import viterbi_decode


def naive_mv(A, v):
    return np.array([min((A[i, j] + v[j] for j in range(len(v))), default=INF)
                     for i in range(A.shape[0])])


def test_mv_minplus_small():
    A = np.array([[0, 2], [INF, 1]])
    assert mv_minplus(A, np.array([3.0, 1.0])).tolist() == [3.0, 2.0]
    assert mv_minplus(A, np.array([INF, INF])).tolist() == [INF, INF]


@given(st.integers(0, 2**32), st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
def test_mm_minplus_matches_loops(seed, a, b, c):
    rng = rng_for(seed)
    X = random_cost_matrix(a, b, 4, 0.3, rng)
    Y = random_cost_matrix(b, c, 4, 0.3, rng)
    want = np.array([[min(X[i, k] + Y[k, j] for k in range(b)) for j in range(c)] for i in range(a)])
    assert np.array_equal(mm_minplus(X, Y), want)


def test_tropical_identity():
    A = random_cost_matrix(5, 5, 3, 0.2, rng_for(1))
    I = tropical_identity(5)
    assert np.array_equal(mm_minplus(A, I), A)
    assert np.array_equal(mm_minplus(I, A), A)


@given(st.integers(0, 2**32), st.integers(1, 200), st.integers(1, 150))
def test_bitmatrix_pack_roundtrip_and_substrates_agree(seed, rows, cols):
    rng = rng_for(seed)
    bits = rng.random((rows, cols)) < 0.3
    M = BitMatrix(bits)
    assert M.words.shape == (rows, -(-cols // 64))
    assert all(M.get(i, j) == bits[i, j] for i, j in [(0, 0), (rows - 1, cols - 1)])
    assert M.count() == bits.sum()
    x = rng.random(cols) < 0.2
    want = (bits & x).any(axis=1)
    assert np.array_equal(bool_mv(M, x, Substrate.NAIVE), want)
    assert np.array_equal(bool_mv(M, x, Substrate.BITPACKED), want)


def test_bool_mv_rejects_bad_length():
    with pytest.raises(ValidationError):
        bool_mv(BitMatrix(np.ones((2, 3), bool)), np.ones(2, bool))


def test_decompose_reconstructs_and_excludes_inf():
    A = random_cost_matrix(20, 20, 5, 0.4, rng_for(9))
    dec = decompose(A)
    assert dec.d == len(np.unique(A[np.isfinite(A)]))
    assert np.array_equal(reconstruct(dec), A)
    cover = sum(m.bits.astype(int) for m in dec.masks)
    assert np.array_equal(cover, np.isfinite(A).astype(int))


def test_auto_bucket_count_and_bound():
    assert auto_bucket_count(1) == 1
    assert auto_bucket_count(4096) == 3
    assert distinct_value_bound(4096) == pytest.approx(2 ** np.sqrt(12))
    with pytest.raises(ValidationError):
        OmvConfig(0)
    with pytest.raises(ValidationError):
        OmvConfig(10).buckets(4)


def check_omv(A, v, cfg):
    dec = decompose(A)
    trace = []
    vals, args = omv_query(dec, v, cfg, trace)
    assert np.array_equal(vals, mv_minplus(A, v))
    finite = np.isfinite(vals)
    assert np.all(args[~finite] == -1)
    rows = np.flatnonzero(finite)
    assert np.array_equal(A[rows, args[rows]] + v[args[rows]], vals[rows])
    # smallest attaining column
    for i in rows[:5]:
        assert args[i] == np.flatnonzero(A[i] + v == vals[i])[0]
    for k in range(dec.d):
        fills = [x for m, _, x in trace if m == k]
        assert fills == sorted(fills)
    return vals


@given(st.integers(0, 2**32), st.integers(1, 80), st.integers(1, 8),
       st.sampled_from([0.0, 0.5, 0.9]), st.one_of(st.none(), st.integers(1, 80)),
       st.sampled_from(list(Substrate)))
def test_omv_matches_naive(seed, n, d, inf_density, p, substrate):
    rng = rng_for(seed)
    A = random_cost_matrix(n, n, d, inf_density, rng)
    v = rng.integers(0, 30, size=n).astype(float)
    v[rng.random(n) < inf_density / 2] = INF
    check_omv(A, v, OmvConfig(min(p, n) if p else None, substrate))


def test_omv_all_inf_matrix_and_vector():
    A = np.full((4, 4), INF)
    vals, args = omv_query(decompose(A), np.zeros(4))
    assert np.all(vals == INF) and np.all(args == -1)
    B = np.zeros((4, 4))
    vals, args = omv_query(decompose(B), np.full(4, INF))
    assert np.all(vals == INF) and np.all(args == -1)


def test_omv_rejects_wrong_vector_length():
    with pytest.raises(ValidationError):
        omv_query(decompose(np.zeros((3, 3))), np.zeros(2))


@given(st.integers(0, 2**32), st.sampled_from([1, 3, 16, 40]), st.integers(1, 8),
       st.integers(1, 12), st.sampled_from([0.0, 0.6]))
def test_fast_viterbi_matches_dp(seed, n, d, T, inf_density):
    inst, obs = random_hmm(n, 3, T, rng_for(seed), d=d, inf_density=inf_density)
    assert fast_viterbi(inst, obs) == viterbi_decode(inst, obs)
    assert fast_viterbi(inst, obs, OmvConfig(1, "naive")) == viterbi_decode(inst, obs)


@given(st.integers(0, 2**32), st.integers(1, 10), st.integers(1, 40))
def test_squaring_matches_dp(seed, n, T):
    rng = rng_for(seed)
    A = random_cost_matrix(n, n, 6, 0.3, rng)
    w = WalkInstance(A, T)
    assert walk_solve_squaring(w) == walk_solve_dp(w).cost


def test_minplus_power_small():
    A = np.array([[1.0, 5.0], [INF, 2.0]])
    assert np.array_equal(minplus_power(A, 1), A)
    assert np.array_equal(minplus_power(A, 3), mm_minplus(mm_minplus(A, A), A))
    with pytest.raises(ValidationError):
        minplus_power(A, 0)
