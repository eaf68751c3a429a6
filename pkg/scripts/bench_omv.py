"""Sweep the bucket count of the online (min,+) product against the naive product.

    python3 scripts/bench_omv.py --n 4096 --d 4 --T 4
"""

import argparse

from vhl.bench import run_bench
from vhl.minplus import OmvConfig, Substrate, auto_bucket_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--T", type=int, default=4)
    ap.add_argument("--repetitions", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--buckets", type=int, nargs="+",
                    default=[0, 8, 16, 32, 64, 128], help="0 means the automatic count")
    args = ap.parse_args()

    print(f"{'substrate':>10} {'buckets':>8} {'naive_s':>9} {'fast_s':>9} {'speedup':>8} agree")
    for substrate in Substrate:
        for p in args.buckets:
            cfg = OmvConfig(p or None, substrate)
            res = run_bench(args.n, args.d, args.T, cfg, args.repetitions, args.seed)
            label = f"{res.buckets}{'*' if not p else ''}"
            print(f"{substrate.value:>10} {label:>8} {res.naive_median:9.4f} {res.fast_median:9.4f} "
                  f"{res.speedup:8.2f} {res.agree}")
    print(f"* automatic count for n={args.n}: {auto_bucket_count(args.n)}")


if __name__ == "__main__":
    main()
