#!/usr/bin/env python3
"""Sweep the hopset pipeline over path graphs of growing size and collect a
single CSV of sizes, call counts, and wall times.

The |H| column should be nondecreasing in n for a fixed configuration; the
script reports this as an observation rather than asserting it.

Usage: python3 scripts/bench_sweep.py [--sizes 128 256 512] [--out bench_sweep.csv]
"""

import argparse
import csv
import time
from fractions import Fraction

from shallowcut import (
    DiGraph,
    ExactTransitiveOracle,
    GeneratorSpec,
    ReductionConfig,
    generate,
    reduce_hopset,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--lambda", dest="lam", type=int, default=8)
    parser.add_argument("--h", type=int, default=8)
    parser.add_argument("--eps", default="1/2")
    parser.add_argument("--reps", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="bench_sweep.csv")
    args = parser.parse_args()

    rows = []
    for n in args.sizes:
        g = generate(GeneratorSpec("path", n=n))
        cfg = ReductionConfig(
            lam=args.lam,
            h=args.h,
            eps=Fraction(args.eps),
            ldd_repetitions=args.reps,
            seed=args.seed,
        )
        t0 = time.perf_counter()
        report = reduce_hopset(g, cfg, ExactTransitiveOracle(n), measure=False)
        elapsed = time.perf_counter() - t0
        rows.append(
            {
                "n": n,
                "m": g.edge_count,
                "hopset_size": report.total_size,
                "oracle_calls": report.oracle_calls,
                "ldd_calls": report.ldd_calls,
                "epochs": report.epoch_count,
                "seconds": round(elapsed, 3),
            }
        )
        print(
            f"n={n}: |H|={report.total_size} oracle_calls={report.oracle_calls} "
            f"({elapsed:.2f}s)"
        )

    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    sizes = [r["hopset_size"] for r in rows]
    trend = "nondecreasing" if sizes == sorted(sizes) else "NOT monotone"
    print(f"wrote {args.out}; |H| trend across n: {trend}")


if __name__ == "__main__":
    main()
