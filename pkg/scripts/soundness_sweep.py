"""Larger seeded sweep: every reduction against its brute-force oracle.

    python3 scripts/soundness_sweep.py --seeds 500
"""

import argparse
import time

from vhl.generate import random_kpartite, rng_for
from vhl.minplus import OmvConfig, fast_viterbi, walk_solve_dp, walk_solve_squaring
from vhl.oracles import min_kclique_bf, min_triangle_bf
from vhl.reductions import kclique_to_viterbi, recover_witness, triangle_to_viterbi, triangle_to_walk
from vhl.viterbi import viterbi_decode


def sweep(name, seeds, make_graph, solve, oracle):
    t0 = time.perf_counter()
    bad = 0
    for s in range(seeds):
        G = make_graph(rng_for(s))
        got, witness = solve(G)
        want = oracle(G)[0]
        bad += got != want or (witness is not None and G.clique_weight(witness) != want)
    print(f"reduction={name} seeds={seeds} mismatches={bad} seconds={time.perf_counter() - t0:.2f}")
    return bad


def sizes(rng, k, max_n, max_m):
    n = [int(x) for x in rng.integers(1, max_n + 1, size=2)]
    return n + [int(x) for x in rng.integers(1, max_m + 1, size=k - 2)]


def viterbi_solver(reduce, cfg=None):
    def solve(G):
        out = reduce(G)
        res = fast_viterbi(out.instance, out.observations, cfg) if cfg else \
            viterbi_decode(out.instance, out.observations)
        return res.cost - out.cost_offset, recover_witness(out, res.path)
    return solve


def walk_solver(G):
    out = triangle_to_walk(G)
    res = walk_solve_dp(out.instance)
    assert walk_solve_squaring(out.instance) == res.cost
    return res.cost - out.cost_offset, recover_witness(out, res.path)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=300)
    ap.add_argument("--max-weight", type=int, default=50)
    args = ap.parse_args()
    W = args.max_weight
    bad = 0
    bad += sweep("triangle-viterbi", args.seeds,
                 lambda r: random_kpartite(sizes(r, 3, 12, 10), 1, W, r),
                 viterbi_solver(triangle_to_viterbi), min_triangle_bf)
    bad += sweep("triangle-viterbi/fast", args.seeds,
                 lambda r: random_kpartite(sizes(r, 3, 12, 10), 1, W, r),
                 viterbi_solver(triangle_to_viterbi, OmvConfig(2)), min_triangle_bf)
    bad += sweep("triangle-walk", args.seeds,
                 lambda r: random_kpartite(sizes(r, 3, 10, 8), 1, W, r),
                 walk_solver, min_triangle_bf)
    for k in (4, 5, 6):
        bad += sweep(f"kclique-viterbi/k={k}", args.seeds // 3,
                     lambda r, k=k: random_kpartite(sizes(r, k, 4, 2), 1, W, r),
                     viterbi_solver(kclique_to_viterbi), min_kclique_bf)
    print(f"total_mismatches={bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
