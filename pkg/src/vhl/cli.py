"""``vhl`` command line: generate graphs, reduce, solve, check against oracles, verify, bench.

Reports are ``key=value`` lines on stdout.  Failures print one
``error=<kind> message=<text>`` line on stderr and exit with status 2; a
rejected certificate exits with status 1.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path



from . import io
from .core import KPartiteGraph, ValidationError, WalkInstance
from .generate import random_complete_graph, random_kpartite, rng_for
from .minplus import (
    OmvConfig, Substrate, decompose, distinct_value_bound, fast_viterbi,
    walk_solve_dp, walk_solve_squaring,
)
from .oracles import min_kclique_bf, min_kclique_general_bf, min_triangle_bf, thread_count
from .reductions import kclique_to_viterbi, recover_witness, triangle_to_viterbi, triangle_to_walk
from .viterbi import forward_vectors, verify_cost_certificate, viterbi_decode

REDUCTIONS = {
    "triangle-viterbi": triangle_to_viterbi,
    "kclique-viterbi": kclique_to_viterbi,
    "triangle-walk": triangle_to_walk,
}


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _fmt(x) -> str:
    x = float(x)
    if x == float("inf"):
        return "inf"
    return str(int(x)) if x.is_integer() else repr(x)


def _emit(key, value, out):
    out.write(f"{key}={value}\n")


def _weight_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _buckets(text: str):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None


def cmd_gen(args, out):
    lo, hi = args.weights
    rng = rng_for(args.seed)
    m = re.fullmatch(r"(\d+)partite", args.kind)
    if args.kind == "complete":
        if len(args.sizes) != 1:
            raise CliError("usage", "complete graphs take a single size")
        G = random_complete_graph(args.sizes[0], lo, hi, rng)
    elif m:
        k = int(m.group(1))
        if len(args.sizes) != k:
            raise CliError("usage", f"{args.kind} needs {k} part sizes, got {len(args.sizes)}")
        G = random_kpartite(args.sizes, lo, hi, rng)
    else:
        raise CliError("usage", f"unknown graph kind {args.kind!r}")
    text = io.dumps(io.graph_to_doc(G) if isinstance(G, KPartiteGraph) else io.complete_graph_to_doc(G))
    if args.output:
        Path(args.output).write_text(text)
        _emit("graph", args.output, out)
        _emit("edges", G.edge_count() if isinstance(G, KPartiteGraph) else G.shape[0] * (G.shape[0] - 1) // 2, out)
    else:
        out.write(text)


def cmd_reduce(args, out):
    G = io.read_graph(args.graph)
    if not isinstance(G, KPartiteGraph):
        raise CliError("input", "reductions need a k-partite graph file")
    if args.reduction == "kclique-viterbi":
        red = kclique_to_viterbi(G, args.z)
    else:
        red = REDUCTIONS[args.reduction](G)
    meta = args.meta or str(Path(args.output).with_suffix(".meta.json"))
    io.write_reduction(args.output, meta, red)
    _emit("instance", args.output, out)
    _emit("metadata", meta, out)
    for key, value in red.params.items():
        _emit(key, value, out)
    _emit("cost_offset", _fmt(red.cost_offset), out)


def _omv_config(args) -> OmvConfig:
    return OmvConfig(args.buckets, Substrate(args.substrate))


def cmd_solve(args, out, err):
    inst, obs = io.read_instance(args.instance)
    algo = args.algo
    if isinstance(inst, WalkInstance):
        if algo in ("dp", "fast"):
            hmm, obs = inst.as_hmm()
        else:
            hmm = None
    else:
        if algo.startswith("walk-"):
            raise CliError("usage", f"--algo {algo} needs a walk instance")
        hmm = inst

    path = None
    if algo == "dp":
        res = viterbi_decode(hmm, obs)
        cost, path = res.cost, res.path
    elif algo == "fast":
        cfg = _omv_config(args)
        d = decompose(hmm.A).d
        bound = distinct_value_bound(hmm.n)
        if d > bound:
            err.write(f"warning=distinct_values_exceed_bound d={d} bound={bound:.3f}\n")
        res = fast_viterbi(hmm, obs, cfg)
        cost, path = res.cost, res.path
    elif algo == "walk-dp":
        res = walk_solve_dp(inst)
        cost, path = res.cost, res.path
    else:
        cost = walk_solve_squaring(inst)

    _emit("algo", algo, out)
    _emit("cost", _fmt(cost), out)
    if path is not None:
        _emit("path", ",".join(str(s) for s in path), out)
    if args.meta:
        red = io.reduction_from_files(args.instance, args.meta)
        _emit("cost_offset", _fmt(red.cost_offset), out)
        _emit("recovered", _fmt(cost - red.cost_offset), out)
        if path is not None and cost != float("inf"):
            _emit("witness", ",".join(str(v) for v in recover_witness(red, path)), out)
    if args.certificate:
        if hmm is None:
            raise CliError("usage", "certificates need --algo dp or fast")
        io.write_certificate(args.certificate, forward_vectors(hmm, obs))
        _emit("certificate", args.certificate, out)


def cmd_oracle(args, out):
    G = io.read_graph(args.graph)
    if isinstance(G, KPartiteGraph):
        if args.problem == "triangle":
            weight, witness = min_triangle_bf(G)
        else:
            weight, witness = min_kclique_bf(G, threads=thread_count())
    else:
        k = 3 if args.problem == "triangle" else args.k
        if k is None:
            raise CliError("usage", "--k is required for kclique on a complete graph")
        weight, witness = min_kclique_general_bf(G, k)
    _emit("problem", args.problem, out)
    _emit("weight", weight, out)
    _emit("witness", ",".join(str(v) for v in witness), out)


def _reason_code(reason: str) -> str:
    for prefix, code in (("start vector", "start_vector_mismatch"),
                         ("recurrence", "recurrence_violated"),
                         ("min entry not", "threshold_not_exceeded"),
                         ("min entry", "threshold_exceeded")):
        if reason.startswith(prefix):
            return code
    return "malformed_certificate"


def cmd_verify(args, out):
    inst, obs = io.read_instance(args.instance)
    if isinstance(inst, WalkInstance):
        inst, obs = inst.as_hmm()
    vectors = io.read_certificate(args.certificate)
    verdict = verify_cost_certificate(inst, obs, vectors, args.threshold)
    _emit("verdict", "accept" if verdict.accepted else "reject", out)
    _emit("reason", _reason_code(verdict.reason), out)
    if verdict.t is not None:
        _emit("t", verdict.t, out)
    if verdict.index is not None:
        _emit("index", verdict.index, out)
    return 0 if verdict.accepted else 1


def cmd_bench(args, out):
    from .bench import run_bench

    res = run_bench(args.n, args.d, args.T, _omv_config(args), args.repetitions, args.seed,
                    args.inf_density)
    for line in res.lines():
        out.write(line + "\n")
    return 0 if res.agree else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vhl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random graph")
    p.add_argument("kind", help="'<k>partite' (e.g. 3partite) or 'complete'")
    p.add_argument("sizes", type=int, nargs="+")
    p.add_argument("--weights", type=_weight_range, default=(1, 9), help="LO..HI (default 1..9)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")

    p = sub.add_parser("reduce", help="reduce a k-partite graph to a Viterbi/walk instance")
    p.add_argument("graph")
    p.add_argument("reduction", choices=sorted(REDUCTIONS))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--meta", help="metadata file (default: <output>.meta.json)")
    p.add_argument("--z", type=int, help="bit count for kclique-viterbi")

    def omv_flags(p):
        p.add_argument("--buckets", type=_buckets, default=None, help="bucket count or 'auto'")
        p.add_argument("--substrate", choices=[s.value for s in Substrate], default="bitpacked")

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--algo", choices=["dp", "fast", "walk-dp", "walk-squaring"], default="dp")
    p.add_argument("--meta", help="reduction metadata; reports the recovered source optimum")
    p.add_argument("--certificate", help="write the forward-vector chain here")
    omv_flags(p)

    p = sub.add_parser("oracle", help="brute-force min triangle / k-clique")
    p.add_argument("graph")
    p.add_argument("--problem", choices=["triangle", "kclique"], default="triangle")
    p.add_argument("--k", type=int, help="clique size for complete-graph files")

    p = sub.add_parser("verify", help="check a forward-vector certificate against a threshold")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.add_argument("--threshold", type=float, required=True)

    p = sub.add_parser("bench", help="time naive vs decomposed online (min,+) MV")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--T", type=int, default=8)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inf-density", type=float, default=0.0)
    omv_flags(p)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "gen":
            return cmd_gen(args, out) or 0
        if args.command == "reduce":
            return cmd_reduce(args, out) or 0
        if args.command == "solve":
            return cmd_solve(args, out, err) or 0
        if args.command == "oracle":
            return cmd_oracle(args, out) or 0
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "bench":
            return cmd_bench(args, out)
    except CliError as e:
        err.write(f"error={e.kind} message={e}\n")
    except ValidationError as e:
        err.write(f"error=validation message={e}\n")
    except (OSError, ValueError) as e:
        err.write(f"error=io message={e}\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
