import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cases import clique_graphs, triangle_graphs
from vhl.core import KPartiteGraph, ValidationError, WalkInstance
from vhl.generate import random_complete_graph, random_hmm, random_kpartite, rng_for
from vhl.minplus import walk_solve_dp
from vhl.oracles import min_kclique_bf, min_kclique_general_bf, min_triangle_bf
from vhl.reductions import (
    clique_bits, default_bit_count, kclique_split, kclique_to_viterbi, normalize_to_stochastic,
    normalize_walk_unary, pad_sparse, recover_witness, triangle_to_viterbi, triangle_to_walk,
)
from vhl.viterbi import path_cost, viterbi_decode


def same_or_cooptimal(inst, obs, before, after):
    """Walks that reuse the same edges in another order tie exactly; rounding may pick either."""
    if after.path == before.path:
        return True
    return abs(path_cost(inst, obs, after.path) - before.cost) <= 1e-9


def uniform_graph(sizes, weight=1):
    k = len(sizes)
    return KPartiteGraph(sizes, {(i, j): np.full((sizes[i], sizes[j]), weight)
                                 for i in range(k) for j in range(i + 1, k)})


def test_triangle_layout_sizes():
    out = triangle_to_viterbi(uniform_graph((2, 3, 5)))
    assert out.params["T"] == 16 and out.params["sigma"] == 7
    assert out.instance.n == 2 + 2 + 3
    assert out.observations.tolist()[-1] == 6
    assert out.instance.symbol_names[5] == "BOT"


def test_triangle_sink_block_emissions():
    out = triangle_to_viterbi(uniform_graph((1, 1, 2)))
    B, lay = out.instance.B, out.layout
    assert np.all(B[lay["sink"]] == 0)
    assert B[lay["start"], lay["BOT_F"]] == math.inf


@pytest.mark.parametrize("G", list(triangle_graphs(25)), ids=lambda G: str(G.part_sizes))
def test_triangle_reduction_sound_with_witness(G):
    out = triangle_to_viterbi(G)
    res = viterbi_decode(out.instance, out.observations)
    weight, _ = min_triangle_bf(G)
    assert res.cost - out.cost_offset == weight
    assert G.clique_weight(recover_witness(out, res.path)) == weight


def test_clique_bits_worked_example():
    assert clique_bits(11, 5) == [1, 1, 0, 1, 0]
    with pytest.raises(ValidationError):
        clique_bits(32, 5)


def test_kclique_layout_counts():
    G = uniform_graph((1, 1, 2, 2))
    assert default_bit_count(G) == 5
    out = kclique_to_viterbi(G)
    assert out.params["T"] == 53
    assert out.params["sigma"] == 2 * 2 + 4


def test_kclique_weight_block_spells_bits():
    sizes = (1, 1, 1, 1)
    cross = {(i, j): np.ones((1, 1), dtype=int) for i in range(4) for j in range(i + 1, 4)}
    cross[(2, 3)] = np.array([[11]])
    out = kclique_to_viterbi(KPartiteGraph(sizes, cross), Z=5)
    lay = out.layout
    block = out.observations[7:12].tolist()
    names = {lay["BOT0"]: "BOT0", lay["BOT1"]: "BOT1"}
    assert [names[s] for s in block] == ["BOT1", "BOT1", "BOT0", "BOT1", "BOT0"]
    assert viterbi_decode(out.instance, out.observations).cost == 16


def test_kclique_rejects_small_Z():
    with pytest.raises(ValidationError):
        kclique_to_viterbi(uniform_graph((1, 1, 1, 1), 9), Z=3)


@pytest.mark.parametrize("G", list(clique_graphs(4, 12, 4, 3)) + list(clique_graphs(3, 6, 4, 3)),
                         ids=lambda G: str(G.part_sizes))
def test_kclique_reduction_sound_with_witness(G):
    out = kclique_to_viterbi(G)
    res = viterbi_decode(out.instance, out.observations)
    weight, _ = min_kclique_bf(G)
    assert res.cost == weight
    assert G.clique_weight(recover_witness(out, res.path)) == weight


def test_walk_layout():
    out = triangle_to_walk(uniform_graph((2, 2, 3)))
    assert out.instance.T == 7
    assert out.params["C"] == 1 + 7 * 1
    assert out.cost_offset == 6 * out.params["C"]


@pytest.mark.parametrize("G", list(triangle_graphs(20, 6, 5, seed=77)), ids=lambda G: str(G.part_sizes))
def test_walk_reduction_sound_with_witness(G):
    out = triangle_to_walk(G)
    res = walk_solve_dp(out.instance)
    weight, _ = min_triangle_bf(G)
    assert res.cost - out.cost_offset == weight
    assert G.clique_weight(recover_witness(out, res.path)) == weight


def test_reductions_reject_wrong_arity():
    with pytest.raises(ValidationError):
        triangle_to_viterbi(uniform_graph((1, 1, 1, 1)))
    with pytest.raises(ValidationError):
        triangle_to_walk(uniform_graph((1, 1)))


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("sizes", [(3, 3, 3), (2, 3, 4), (4, 4, 4)])
def test_split_matches_general_brute_force(seed, sizes):
    W = random_complete_graph(9, 1, 20, rng_for(seed))
    best = min(min_kclique_bf(piece.graph)[0] for piece in kclique_split(W, sizes))
    assert best == min_kclique_general_bf(W, 3)[0]


def test_split_vertices_and_padding():
    W = random_complete_graph(5, 1, 5, rng_for(0))
    pieces = list(kclique_split(W, (2, 2, 2)))
    assert len(pieces) == 3 ** 3
    assert any(-1 in block for piece in pieces for block in piece.vertices)
    with pytest.raises(ValidationError):
        list(kclique_split(W, (2, 2)))


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 8), st.data())
def test_stochastic_normalization(seed, n, T, data):
    sigma = data.draw(st.integers(1, T))
    inst, obs = random_hmm(n, sigma, T, rng_for(seed), integer=False)
    st_hmm = normalize_to_stochastic(inst, T)
    assert np.allclose(st_hmm.trans.sum(axis=1), 1, atol=1e-9)
    assert np.allclose(st_hmm.emit.sum(axis=1), 1, atol=1e-9)
    before = viterbi_decode(inst, obs)
    after = viterbi_decode(st_hmm.cost_instance(), obs)
    assert same_or_cooptimal(inst, obs, before, after)
    assert abs((after.cost - before.cost) - (T * math.log(n) + T * math.log(T))) <= 1e-9


def test_stochastic_shift_value():
    inst, _ = random_hmm(2, 3, 3, rng_for(0))
    assert normalize_to_stochastic(inst, 3).shift == pytest.approx(3 * math.log(2) + 3 * math.log(3))
    with pytest.raises(ValidationError):
        normalize_to_stochastic(inst, 2)


def test_unary_clique_probability():
    w = WalkInstance([[1, 2, 3], [2, 1, 1], [5, 4, 1]], T=4)
    st_hmm = normalize_walk_unary(w)
    clique = list(st_hmm.extra_states)
    assert len(clique) == 12
    assert np.all(st_hmm.trans[np.ix_(clique, clique)] == 1 / 12)
    assert np.allclose(st_hmm.trans.sum(axis=1), 1, atol=1e-9)


def test_unary_single_state():
    w = WalkInstance([[3.0]], T=2)
    st_hmm = normalize_walk_unary(w, scale=6.0)
    assert st_hmm.trans[0, 0] == pytest.approx(math.exp(-0.5))


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 8))
def test_unary_normalization_keeps_walk(seed, n, T):
    rng = rng_for(seed)
    w = WalkInstance(rng.random((n, n)) * 9 + 1, T)
    st_hmm = normalize_walk_unary(w)
    hmm, obs = w.as_hmm()
    before = viterbi_decode(hmm, obs)
    after = viterbi_decode(st_hmm.cost_instance(), obs)
    assert same_or_cooptimal(hmm, obs, before, after)
    assert st_hmm.scale * (after.cost - st_hmm.shift) == pytest.approx(before.cost, abs=1e-9)


def test_unary_preconditions():
    with pytest.raises(ValidationError):
        normalize_walk_unary(WalkInstance([[0.0]], 2))
    with pytest.raises(ValidationError):
        normalize_walk_unary(WalkInstance([[1.0, math.inf], [math.inf, math.inf]], 2))


@given(st.integers(0, 2**32), st.integers(1, 5), st.integers(0, 6), st.integers(1, 6))
def test_pad_sparse_keeps_optimum(seed, n, extra, T):
    inst, obs = random_hmm(n, 2, T, rng_for(seed), inf_density=0.2)
    padded = pad_sparse(inst, n + extra)
    assert padded.n == n + extra
    assert viterbi_decode(padded, obs) == viterbi_decode(inst, obs)


def test_pad_sparse_rejects_shrink():
    inst, _ = random_hmm(3, 2, 2, rng_for(0))
    with pytest.raises(ValidationError):
        pad_sparse(inst, 2)
