"""Benchmark harness: seeded workloads, lock baselines and the CLI."""
from .workloads import (
    GRAPH_IMPLS,
    PQ_IMPLS,
    ConfigError,
    WorkloadConfig,
    check_graph,
    check_pq,
    run_graph_bench,
    run_pq_bench,
)

__all__ = [
    "GRAPH_IMPLS",
    "PQ_IMPLS",
    "ConfigError",
    "WorkloadConfig",
    "check_graph",
    "check_pq",
    "run_graph_bench",
    "run_pq_bench",
]
