"""Command-line front end.

Subcommands: gen, ldd, dag-reduce, reduce, verify, bench. Exit codes:
0 success, 1 verification failure, 2 usage error (argparse's own
convention for bad flags is preserved).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np
import scipy

from . import __version__
from .dag_reduce import ClusteredInput, reduce_clustered_dag
from .fileio import (
    FormatError,
    read_edge_set,
    read_graph,
    read_weighted_edge_set,
    write_edge_set,
    write_graph,
    write_weighted_edge_set,
)
from .generators import FAMILIES, GeneratorSpec, generate
from .graphs import DiGraph, scc_topological
from .ldd import LddParams, LddResult, estimate_removal_probability, low_diameter_decomposition
from .oracles import ExactReachabilityOracle, ExactTransitiveOracle, HubSamplingOracle
from .shallow_reduce import ReductionConfig, reduce_hopset, reduce_shortcut
from .verify import (
    verify_clustered,
    verify_distance_preservation,
    verify_hopset,
    verify_ldd,
    verify_shortcut,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Invalid invocation; mapped to exit code 2."""


@dataclass
class RunManifest:
    """Reproducibility record for one pipeline run."""

    config: dict
    input_path: str
    input_sha256: str
    output_paths: dict
    versions: dict = field(default_factory=dict)
    stage_seconds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "input_path": self.input_path,
            "input_sha256": self.input_sha256,
            "output_paths": self.output_paths,
            "versions": self.versions,
            "stage_seconds": self.stage_seconds,
        }


def _versions() -> dict:
    return {
        "shallowcut": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"not a rational number: {text!r}") from exc


def _load_graph(path: str) -> DiGraph:
    try:
        return read_graph(path)
    except (OSError, FormatError) as exc:
        raise CliError(f"cannot read graph {path}: {exc}") from exc


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _make_oracle(name: str, n: int, hub_rate: float):
    if name == "exact":
        return ExactTransitiveOracle(n)
    if name == "hub":
        return HubSamplingOracle(n, hub_rate)
    raise CliError(f"unknown oracle {name!r}")


def _emit(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    spec = GeneratorSpec(
        family=args.family,
        n=args.n,
        m=args.m,
        big_n=args.N,
        seed=args.seed,
        layers=args.layers,
        blocks=args.blocks,
        block_size=args.block_size,
        paths=args.paths,
    )
    try:
        g = generate(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = Path(args.out) if args.out else _out_dir(args) / f"{args.family}.txt"
    write_graph(g, out)
    print(f"wrote {out} (n={g.vertex_count} m={g.edge_count} N={g.max_length_bound})")
    _emit(args, {"path": str(out), "n": g.vertex_count, "m": g.edge_count})
    return EXIT_OK


def _cmd_ldd(args) -> int:
    g = _load_graph(args.graph)
    params = LddParams(d=args.d, c=args.c, seed=args.seed)
    result = low_diameter_decomposition(g, params)
    report = verify_ldd(g, args.d, result, ceiling=args.ceiling)
    payload = {
        "removed_edges": list(result.removed_edges),
        "components": [list(c) for c in result.components],
        "passed": report.passed,
        "max_weak_diameter": report.measured_hopbound,
    }
    if args.trials:
        freq = estimate_removal_probability(g, params, args.trials)
        payload["removal_frequency_max"] = float(freq.max()) if len(freq) else 0.0
        payload["removal_frequency_median"] = float(np.median(freq)) if len(freq) else 0.0
    print(
        f"components={len(result.components)} removed={len(result.removed_edges)} "
        f"max_weak_diam={report.measured_hopbound}"
    )
    _emit(args, payload)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_dag_reduce(args) -> int:
    g = _load_graph(args.graph)
    comps = tuple(scc_topological(g))
    cinput = ClusteredInput(g, comps, args.lam * args.h)
    oracle = _make_oracle(args.oracle, g.vertex_count, args.hub_rate)
    eps = _parse_fraction(args.eps)
    hopset, trace = reduce_clustered_dag(
        cinput, oracle, args.lam, args.h, eps,
        seed_seq=np.random.SeedSequence(args.seed),
    )
    out = _out_dir(args) / "dag-hopset.txt"
    write_weighted_edge_set(hopset, out)
    print(f"iterations={trace.oracle_calls} hopset={len(hopset)} wrote {out}")
    _emit(args, {"trace": trace.to_json(), "hopset_size": len(hopset), "path": str(out)})
    return EXIT_OK


def _cmd_reduce(args) -> int:
    graph_path = Path(args.graph)
    g = _load_graph(args.graph)
    cfg = ReductionConfig(
        lam=args.lam,
        h=args.h,
        eps=_parse_fraction(args.eps),
        c0=_parse_fraction(args.c0),
        seed=args.seed,
        ldd_repetitions=args.reps,
        strict_mode=args.strict,
    )
    out = _out_dir(args)
    stage_seconds: dict[str, float] = {}
    t0 = time.perf_counter()
    if args.mode == "shortcut":
        oracle = ExactReachabilityOracle(g.vertex_count)
        report = reduce_shortcut(g, cfg, oracle, verify=not args.no_verify,
                                 ceiling=args.ceiling)
        stage_seconds["reduce"] = time.perf_counter() - t0
        edges_path = out / "shortcut.txt"
        write_edge_set(report.shortcut, edges_path)
    else:
        oracle = _make_oracle(args.oracle, g.vertex_count, args.hub_rate)
        report = reduce_hopset(g, cfg, oracle)
        stage_seconds["reduce"] = time.perf_counter() - t0
        if not args.no_verify and g.vertex_count <= args.ceiling:
            t1 = time.perf_counter()
            report.verification = verify_distance_preservation(
                g, report.hopset, ceiling=args.ceiling
            )
            stage_seconds["verify"] = time.perf_counter() - t1
        edges_path = out / "hopset.txt"
        write_weighted_edge_set(report.hopset, edges_path)
    report_path = out / "report.json"
    report_path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    manifest = RunManifest(
        config={
            "mode": args.mode,
            "lambda": cfg.lam,
            "h": cfg.h,
            "eps": str(cfg.eps),
            "c0": str(cfg.c0),
            "seed": cfg.seed,
            "reps": cfg.ldd_repetitions,
            "strict": cfg.strict_mode,
            "oracle": args.oracle,
        },
        input_path=str(graph_path),
        input_sha256=_sha256(graph_path),
        output_paths={"edges": str(edges_path), "report": str(report_path)},
        versions=_versions(),
        stage_seconds=stage_seconds,
    )
    (out / "manifest.json").write_text(
        json.dumps(manifest.to_json(), indent=2, sort_keys=True) + "\n"
    )
    passed = report.verification.passed if report.verification else True
    print(
        f"mode={args.mode} size={report.total_size} oracle_calls={report.oracle_calls} "
        f"clamps={report.clamp_count} verified={'yes' if passed else 'NO'}"
    )
    _emit(args, report.to_json())
    return EXIT_OK if passed else EXIT_VERIFY


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    if args.kind == "hopset":
        hopset = read_weighted_edge_set(args.edges)
        report = verify_hopset(g, hopset, _parse_fraction(args.alpha), args.h,
                               ceiling=args.ceiling)
    elif args.kind == "shortcut":
        shortcut = read_edge_set(args.edges)
        report = verify_shortcut(g, shortcut, args.h, ceiling=args.ceiling)
    elif args.kind == "ldd":
        data = json.loads(Path(args.decomposition).read_text())
        result = LddResult(
            tuple(int(e) for e in data["removed_edges"]),
            tuple(tuple(int(v) for v in c) for c in data["components"]),
        )
        report = verify_ldd(g, args.d, result, ceiling=args.ceiling)
    else:
        report = verify_clustered(g, args.d, ceiling=args.ceiling)
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_bench(args) -> int:
    cfg = ReductionConfig(
        lam=args.lam,
        h=args.h,
        eps=_parse_fraction(args.eps),
        seed=args.seed,
        ldd_repetitions=args.reps,
    )
    rows = []
    for rep in range(args.repeat):
        g = _load_graph(args.graph)
        oracle = _make_oracle(args.oracle, g.vertex_count, args.hub_rate)
        t0 = time.perf_counter()
        report = reduce_hopset(g, cfg, oracle, clamp_distances=False, measure=False)
        elapsed = time.perf_counter() - t0
        rows.append(
            {
                "rep": rep,
                "n": g.vertex_count,
                "m": g.edge_count,
                "hopset_size": report.total_size,
                "oracle_calls": report.oracle_calls,
                "ldd_calls": report.ldd_calls,
                "seconds": round(elapsed, 4),
            }
        )
    out = _out_dir(args) / "bench.csv"
    with out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    med = float(np.median([r["seconds"] for r in rows]))
    print(f"wrote {out} ({len(rows)} rows, median {med:.3f}s)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--json", action="store_true", help="emit a JSON payload to stdout")


def _add_reduce_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--eps", default="1")
    p.add_argument("--oracle", choices=("exact", "hub"), default="exact")
    p.add_argument("--hub-rate", type=float, default=0.25)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shallowcut",
        description="Hopset and shortcut construction for directed graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--blocks", type=int, default=0)
    p.add_argument("--block-size", type=int, default=3)
    p.add_argument("--paths", type=int, default=2)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ldd", help="run the low-diameter decomposition")
    p.add_argument("graph")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--ceiling", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=_cmd_ldd)

    p = sub.add_parser("dag-reduce", help="clustered-DAG reduction on one graph")
    p.add_argument("graph")
    _add_reduce_config(p)
    _add_common(p)
    p.set_defaults(func=_cmd_dag_reduce)

    p = sub.add_parser("reduce", help="full hopset/shortcut pipeline")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("hopset", "shortcut"), default="hopset")
    _add_reduce_config(p)
    p.add_argument("--c0", default="1")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--ceiling", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="check a previously produced artifact")
    p.add_argument("graph")
    p.add_argument("--kind", choices=("hopset", "shortcut", "ldd", "clustered"), required=True)
    p.add_argument("--edges", help="hopset/shortcut edge file")
    p.add_argument("--decomposition", help="JSON from the ldd subcommand")
    p.add_argument("--alpha", default="1")
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="timed pipeline repetitions, CSV output")
    p.add_argument("graph")
    _add_reduce_config(p)
    p.add_argument("--reps", type=int, default=1, help="LDD repetitions per phase")
    p.add_argument("--repeat", type=int, default=1, help="timed pipeline runs")
    _add_common(p)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        if args.kind in ("hopset", "shortcut") and not args.edges:
            parser.error("--edges is required for hopset/shortcut verification")
        if args.kind == "ldd" and not args.decomposition:
            parser.error("--decomposition is required for ldd verification")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
