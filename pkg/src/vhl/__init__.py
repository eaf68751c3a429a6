"""Tropical (min,+) Viterbi decoding, fast online MV, hardness reductions and brute-force oracles."""

from .core import (
    INF, DecodeResult, HmmInstance, KPartiteGraph, ReductionOutput, ValidationError, WalkInstance,
    validate,
)
from .minplus import (
    OmvConfig, Substrate, decompose, fast_viterbi, minplus_power, mm_minplus, mv_minplus,
    omv_query, walk_solve_dp, walk_solve_squaring,
)
from .oracles import min_kclique_bf, min_kclique_general_bf, min_triangle_bf
from .reductions import (
    kclique_split, kclique_to_viterbi, normalize_to_stochastic, normalize_walk_unary, pad_sparse,
    recover_witness, triangle_to_viterbi, triangle_to_walk,
)
from .viterbi import (
    brute_force_decode, forward_vectors, path_cost, verify_cost_certificate, viterbi_decode,
)

__version__ = "0.1.0"
