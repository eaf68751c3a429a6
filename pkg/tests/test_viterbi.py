import numpy as np
import pytest
from hypothesis import given, strategies as st

from vhl.core import INF, HmmInstance, ValidationError
from vhl.generate import random_hmm, rng_for
from vhl.viterbi import (
    brute_force_decode, forward_vectors, path_cost, verify_cost_certificate, viterbi_decode,
)


def small_instance():
    A = [[1, 2], [3, 0]]
    B = [[0, 5], [2, 1]]
    return HmmInstance(A, B, 0), [1, 0, 1]


def test_hand_example():
    inst, obs = small_instance()
    res = viterbi_decode(inst, obs)
    assert res == brute_force_decode(inst, obs)
    assert path_cost(inst, obs, res.path) == res.cost
    assert res.path[0] == 0 and len(res.path) == len(obs) + 1


def test_empty_observation_sequence_rejected():
    inst, _ = small_instance()
    with pytest.raises(ValidationError, match="non-empty"):
        viterbi_decode(inst, [])


def test_unreachable_gives_inf():
    inst = HmmInstance([[INF, INF], [INF, 0]], [[0], [0]])
    assert viterbi_decode(inst, [0, 0]).cost == INF
    assert brute_force_decode(inst, [0, 0]).cost == INF


def test_ties_break_to_backpointer_order():
    inst = HmmInstance(np.zeros((3, 3)), np.zeros((3, 1)))
    res = viterbi_decode(inst, [0, 0, 0])
    assert res.path == (0, 0, 0, 0)
    assert brute_force_decode(inst, [0, 0, 0]).path == res.path


def test_path_cost_validates():
    inst, obs = small_instance()
    with pytest.raises(ValidationError):
        path_cost(inst, obs, (0, 1))
    with pytest.raises(ValidationError):
        path_cost(inst, obs, (1, 0, 0, 0))


def test_brute_force_budget():
    inst, _ = small_instance()
    with pytest.raises(ValidationError):
        brute_force_decode(inst, [0] * 30, budget=1000)


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 3), st.integers(1, 6),
       st.sampled_from([0.0, 0.3]))
def test_dp_matches_exhaustive(seed, n, sigma, T, inf_density):
    inst, obs = random_hmm(n, sigma, T, rng_for(seed), inf_density=inf_density)
    assert viterbi_decode(inst, obs) == brute_force_decode(inst, obs)


@given(st.integers(0, 2**32), st.integers(1, 5), st.integers(1, 6))
def test_certificate_accept_reject(seed, n, T):
    inst, obs = random_hmm(n, 2, T, rng_for(seed))
    vecs = forward_vectors(inst, obs)
    opt = viterbi_decode(inst, obs).cost
    assert verify_cost_certificate(inst, obs, vecs, opt - 1)
    verdict = verify_cost_certificate(inst, obs, vecs, opt)
    assert not verdict and verdict.t == T and verdict.index is None


def test_certificate_locates_perturbation():
    inst, obs = random_hmm(4, 2, 5, rng_for(3))
    vecs = [v.copy() for v in forward_vectors(inst, obs)]
    vecs[2][3] += 1
    verdict = verify_cost_certificate(inst, obs, vecs, -1)
    assert (verdict.accepted, verdict.t, verdict.index) == (False, 2, 3)
    assert "recurrence violated" in verdict.reason


def test_certificate_start_vector_and_shape():
    inst, obs = random_hmm(3, 2, 2, rng_for(4))
    vecs = [v.copy() for v in forward_vectors(inst, obs)]
    vecs[0][1] = 0.0
    verdict = verify_cost_certificate(inst, obs, vecs, -1)
    assert (verdict.t, verdict.index) == (0, 1) and "start vector" in verdict.reason
    with pytest.raises(ValidationError):
        verify_cost_certificate(inst, obs, vecs[:-1], 0)
    with pytest.raises(ValidationError):
        verify_cost_certificate(inst, obs, [v[:2] for v in vecs], 0)
