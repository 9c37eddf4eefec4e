"""Benchmark throughput of combining structures against lock baselines.

Exit status: 0 on success, 2 on a configuration error, 3 when the checked
pre-run finds a verification failure.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from typing import Sequence

from .workloads import CSV_FIELDS, GRAPH_IMPLS, PQ_IMPLS, ConfigError, WorkloadConfig, check_graph, check_pq, run_graph_bench, run_pq_bench

EXIT_CONFIG = 2
EXIT_VERIFY = 3

FULL_SCALE = {"pq": {"size": 8 * 10**5}, "graph": {"size": 10**5}}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parcomb-bench", description=__doc__.splitlines()[0])
    p.add_argument("--bench", choices=("pq", "graph"), required=True)
    p.add_argument("--impl", default=None,
                   help="structure kind, or a comma-separated list; default: every kind for the bench. "
                        f"pq: {', '.join(PQ_IMPLS)}; graph: {', '.join(GRAPH_IMPLS)}")
    p.add_argument("--threads", default="1", help="thread count, or a comma-separated list")
    p.add_argument("--size", type=int, default=None,
                   help="initial queue size S (default 1e5) or vertex count (default 1e4)")
    p.add_argument("--read-fraction", type=float, default=1.0, help="share of connectivity queries (graph)")
    p.add_argument("--edges", choices=("tree", "trees"), default="tree")
    p.add_argument("--duration", type=float, default=2.0, help="seconds per measured run")
    p.add_argument("--warmup", type=float, default=1.0, help="seconds of unmeasured warmup")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checked", action="store_true", help="verify each configuration on a short run first")
    p.add_argument("--full-scale", action="store_true",
                   help="S=8e5 / 1e5 vertices, 10 s runs and 10 s warmup unless given explicitly")
    p.add_argument("--csv", default="-", help="output path, '-' for standard output")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _configs(args: argparse.Namespace) -> list[WorkloadConfig]:
    impls = args.impl.split(",") if args.impl else list(PQ_IMPLS if args.bench == "pq" else GRAPH_IMPLS)
    allowed = PQ_IMPLS if args.bench == "pq" else GRAPH_IMPLS
    for impl in impls:
        if impl not in allowed:
            raise ConfigError(f"--impl {impl} is not a {args.bench} structure (choose from {', '.join(allowed)})")
    try:
        threads = [int(t) for t in args.threads.split(",")]
    except ValueError:
        raise ConfigError(f"--threads must be integers, got {args.threads!r}") from None
    size, duration, warmup = args.size, args.duration, args.warmup
    if args.full_scale:
        size = size if size is not None else FULL_SCALE[args.bench]["size"]
        duration = 10.0 if duration == 2.0 else duration
        warmup = 10.0 if warmup == 1.0 else warmup
    return [
        WorkloadConfig(impl, threads=p, duration=duration, size=size, read_fraction=args.read_fraction,
                       edges=args.edges, seed=args.seed, reps=args.reps, warmup=warmup)
        for impl in impls
        for p in threads
    ]


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        configs = _configs(args)
    except ConfigError as exc:
        print(f"parcomb-bench: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.checked:
        for cfg in configs:
            verdict = check_pq(cfg) if cfg.is_pq else check_graph(cfg)
            if not verdict:
                print(f"parcomb-bench: verification failed for {cfg.structure} "
                      f"P={cfg.threads}: {verdict.message}", file=sys.stderr)
                return EXIT_VERIFY
            logging.info("checked %s P=%d: ok", cfg.structure, cfg.threads)

    out = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for cfg in configs:
            rows = run_pq_bench(cfg) if cfg.is_pq else run_graph_bench(cfg)
            writer.writerows(rows)
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
