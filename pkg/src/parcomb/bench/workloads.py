"""Seeded benchmark workloads for the priority queue and the dynamic graph."""
from __future__ import annotations

import logging
import random
import statistics
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable, Iterator

from ..heap import EMPTY, EXTRACT_MIN, INSERT, HeapState, PhaseRecord, PriorityQueue, seq_extract_min, seq_insert
from ..read_optimized import ADD_EDGE, CONNECTED, REMOVE_EDGE, GraphDemo, ReadOptimized, ReadPhaseRecord
from ..verification import (
    MultisetOracle,
    Verdict,
    check_bounds,
    check_final,
    check_phases,
    check_quiescence,
    check_read_log,
)
from .locks import FairLock, RWLock

log = logging.getLogger(__name__)

PQ_IMPLS = ("pq-parallel-combining", "pq-sequential-combining", "pq-coarse-lock")
GRAPH_IMPLS = ("graph-parallel-combining", "graph-coarse-lock", "graph-rw-lock")
VALUE_RANGE = 2**31  # values drawn from [0, 2^31 - 1]
TREES_IN_UNIVERSE = 10

CSV_FIELDS = ("structure", "threads", "size", "read_fraction", "mode", "rep", "throughput_ops_per_sec")


class ConfigError(ValueError):
    pass


@dataclass
class WorkloadConfig:
    structure: str
    threads: int = 1
    duration: float = 2.0
    size: int | None = None  # queue prefill S, or vertex count for graphs
    read_fraction: float = 1.0
    edges: str = "tree"
    seed: int = 0
    reps: int = 5
    warmup: float = 1.0

    def __post_init__(self) -> None:
        if self.structure not in PQ_IMPLS + GRAPH_IMPLS:
            raise ConfigError(f"unknown structure {self.structure!r}")
        if self.size is None:
            self.size = 10**5 if self.is_pq else 10**4
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not 0.0 <= self.read_fraction <= 1.0:
            raise ConfigError("read fraction must lie in [0, 1]")
        if self.edges not in ("tree", "trees"):
            raise ConfigError("edges must be 'tree' or 'trees'")
        if self.duration <= 0 or self.warmup < 0 or self.reps < 1 or self.size < 0:
            raise ConfigError("duration must be positive, warmup non-negative, reps >= 1, size >= 0")
        if not self.is_pq and self.size < 2:
            raise ConfigError("graph workloads need at least 2 vertices")

    @property
    def is_pq(self) -> bool:
        return self.structure in PQ_IMPLS


def _rng(cfg: WorkloadConfig, *stream: Any) -> random.Random:
    # str seeds hash deterministically across runs
    return random.Random(":".join(map(str, (cfg.seed, *stream))))


# -- priority queue ------------------------------------------------------------


class LockedPQ:
    """Sequential binary heap behind one fair lock."""

    def __init__(self, h: HeapState, record_log: bool = False):
        self.heap = h
        self.lock = FairLock()
        self.log: list[PhaseRecord] | None = [] if record_log else None

    def insert(self, x: int) -> None:
        with self.lock:
            m = self.heap.m
            seq_insert(self.heap, x)
            if self.log is not None:
                self.log.append(PhaseRecord(len(self.log), m, [(INSERT, x, None, 0)]))

    def extract_min(self) -> Any:
        with self.lock:
            m = self.heap.m
            res = seq_extract_min(self.heap) if m else EMPTY
            if self.log is not None:
                self.log.append(PhaseRecord(len(self.log), m, [(EXTRACT_MIN, None, res, 0)]))
            return res


def prefill(cfg: WorkloadConfig, rep: Any) -> list[int]:
    rng = _rng(cfg, "prefill", rep)
    return [rng.randrange(VALUE_RANGE) for _ in range(cfg.size)]


def build_pq(cfg: WorkloadConfig, values: list[int], record_log: bool = False):
    h = HeapState.from_array(sorted(values))  # a sorted array is a valid heap
    if cfg.structure == "pq-coarse-lock":
        return LockedPQ(h, record_log)
    pq = PriorityQueue(mode="parallel" if cfg.structure == "pq-parallel-combining" else "sequential",
                       record_log=record_log)
    pq.behavior.h = h
    return pq


def pq_ops(cfg: WorkloadConfig, rep: Any, tid: int) -> Iterator[tuple[str, int | None]]:
    """Endless 50/50 insert / extract_min stream for one thread."""
    rng = _rng(cfg, "ops", rep, tid)
    rand, randrange = rng.random, rng.randrange
    while True:
        if rand() < 0.5:
            yield INSERT, randrange(VALUE_RANGE)
        else:
            yield EXTRACT_MIN, None


def _pq_call(pq) -> Callable[[tuple[str, Any]], Any]:
    insert, extract_min = pq.insert, pq.extract_min

    def call(op):
        if op[0] is INSERT:
            insert(op[1])
        else:
            extract_min()

    return call


def verify_pq(pq, values: list[int]) -> Verdict:
    oracle = MultisetOracle(values)
    for check in (lambda: check_phases(pq.log, oracle), lambda: check_final(pq.heap, oracle),
                  lambda: check_quiescence(pq.heap)):
        v = check()
        if not v:
            return v
    for rec in pq.log:
        v = check_bounds(rec)
        if not v:
            return v
    return Verdict(True)


# -- dynamic graph -------------------------------------------------------------


def random_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.append((min(u, v), max(u, v)))
    return edges


def edge_universe(cfg: WorkloadConfig) -> list[tuple[int, int]]:
    rng = _rng(cfg, "universe")
    trees = 1 if cfg.edges == "tree" else TREES_IN_UNIVERSE
    edges: set[tuple[int, int]] = set()
    for _ in range(trees):
        edges.update(random_tree(cfg.size, rng))
    return sorted(edges)


def initial_graph(cfg: WorkloadConfig, universe: list[tuple[int, int]], rep: Any) -> GraphDemo:
    rng = _rng(cfg, "prefill", rep)
    return GraphDemo(cfg.size, [e for e in universe if rng.random() < 0.5])


def graph_ops(cfg: WorkloadConfig, universe: list[tuple[int, int]], rep: Any, tid: int) -> Iterator[tuple[str, tuple[int, int]]]:
    """Query with probability x, else add or remove a universe edge, (1 - x)/2 each."""
    rng = _rng(cfg, "ops", rep, tid)
    rand, randrange = rng.random, rng.randrange
    n, x, k = cfg.size, cfg.read_fraction, len(universe)
    add_cut = x + (1 - x) / 2
    while True:
        r = rand()
        if r < x:
            yield CONNECTED, (randrange(n), randrange(n))
        elif r < add_cut:
            yield ADD_EDGE, universe[randrange(k)]
        else:
            yield REMOVE_EDGE, universe[randrange(k)]


class LockedGraph:
    """Graph behind a fair lock or a readers-writer lock.

    With ``record_log`` every operation is logged with the number of updates
    applied before it, which is enough to replay the run as phases.
    """

    def __init__(self, g: GraphDemo, rw: bool, record_log: bool = False):
        self.g = g
        self.rw = rw
        self.lock = RWLock() if rw else FairLock()
        self.entries: list[tuple[int, str, Any, Any]] | None = [] if record_log else None
        self._epoch = 0

    def execute(self, method: str, input: Any) -> Any:
        g = self.g
        if g.is_update(method):
            acquire, release = (self.lock.acquire_write, self.lock.release_write) if self.rw else (self.lock.acquire, self.lock.release)
        else:
            acquire, release = (self.lock.acquire_read, self.lock.release_read) if self.rw else (self.lock.acquire, self.lock.release)
        acquire()
        try:
            res = g.apply(method, input)
            if self.entries is not None:
                if g.is_update(method):
                    self._epoch += 1
                self.entries.append((self._epoch, method, input, res))
            return res
        finally:
            release()

    @property
    def log(self) -> list[ReadPhaseRecord]:
        phases = [ReadPhaseRecord(e) for e in range(self._epoch + 1)]
        for epoch, method, input, res in self.entries or ():
            rec = phases[epoch]
            if self.g.is_update(method):
                rec.updates.append((method, input, res))
            else:
                rec.reads.append((method, input, res))
        return phases


def build_graph(cfg: WorkloadConfig, g: GraphDemo, record_log: bool = False):
    if cfg.structure == "graph-parallel-combining":
        return ReadOptimized(g, record_log=record_log)
    return LockedGraph(g, rw=cfg.structure == "graph-rw-lock", record_log=record_log)


# -- driver ----------------------------------------------------------------------


def timed_run(threads: int, duration: float, make_worker: Callable[[int], Callable[[], Any]]) -> float:
    """Run ``threads`` workers for ``duration`` seconds; returns ops/sec.

    Each worker function performs one operation per call.  Counts are kept
    per thread and summed once everyone has stopped.
    """
    stop = threading.Event()
    counts = [0] * threads
    start = threading.Barrier(threads + 1)
    errors: list[BaseException] = []

    def body(tid: int) -> None:
        op = make_worker(tid)
        start.wait()
        n = 0
        is_set = stop.is_set
        try:
            while not is_set():
                op()
                n += 1
        except BaseException as exc:  # surfaced by the caller
            errors.append(exc)
            stop.set()
        counts[tid] = n

    workers = [threading.Thread(target=body, args=(t,), daemon=True) for t in range(threads)]
    for w in workers:
        w.start()
    start.wait()
    t0 = time.perf_counter()
    time.sleep(duration)
    stop.set()
    for w in workers:
        w.join()
    elapsed = time.perf_counter() - t0
    if errors:
        raise errors[0]
    return sum(counts) / elapsed


def _pq_trial(cfg: WorkloadConfig, rep: Any, duration: float, record_log: bool = False):
    values = prefill(cfg, rep)
    pq = build_pq(cfg, values, record_log)
    call = _pq_call(pq)

    def make(tid: int):
        ops = pq_ops(cfg, rep, tid)
        return lambda: call(next(ops))

    return timed_run(cfg.threads, duration, make), pq, values


def _graph_trial(cfg: WorkloadConfig, universe, rep: Any, duration: float, record_log: bool = False):
    g = initial_graph(cfg, universe, rep)
    start = g.copy()
    structure = build_graph(cfg, g, record_log)
    execute = structure.execute

    def make(tid: int):
        ops = graph_ops(cfg, universe, rep, tid)

        def one():
            method, input = next(ops)
            execute(method, input)

        return one

    return timed_run(cfg.threads, duration, make), structure, start


CHECK_DURATION = 0.5


def check_pq(cfg: WorkloadConfig, duration: float = CHECK_DURATION) -> Verdict:
    _, pq, values = _pq_trial(cfg, "check", duration, record_log=True)
    return verify_pq(pq, values)


def check_graph(cfg: WorkloadConfig, duration: float = CHECK_DURATION) -> Verdict:
    universe = edge_universe(cfg)
    _, structure, start = _graph_trial(cfg, universe, "check", duration, record_log=True)
    return check_read_log(structure.log, start)


def _row(cfg: WorkloadConfig, rep: Any, throughput: float) -> dict[str, Any]:
    return {
        "structure": cfg.structure,
        "threads": cfg.threads,
        "size": cfg.size,
        "read_fraction": "" if cfg.is_pq else cfg.read_fraction,
        "mode": "uniform" if cfg.is_pq else cfg.edges,
        "rep": rep,
        "throughput_ops_per_sec": round(throughput, 1),
    }


def run_pq_bench(cfg: WorkloadConfig) -> list[dict[str, Any]]:
    if not cfg.is_pq:
        raise ConfigError(f"{cfg.structure} is not a priority-queue structure")
    if cfg.warmup > 0:
        _pq_trial(cfg, "warmup", cfg.warmup)
    rows = []
    for rep in range(cfg.reps):
        tput, _, _ = _pq_trial(cfg, rep, cfg.duration)
        log.info("%s P=%d rep %d: %.0f ops/s", cfg.structure, cfg.threads, rep, tput)
        rows.append(_row(cfg, rep, tput))
    rows.append(_row(cfg, "mean", statistics.fmean(r["throughput_ops_per_sec"] for r in rows)))
    return rows


def run_graph_bench(cfg: WorkloadConfig) -> list[dict[str, Any]]:
    if cfg.is_pq:
        raise ConfigError(f"{cfg.structure} is not a graph structure")
    universe = edge_universe(cfg)
    if cfg.warmup > 0:
        _graph_trial(cfg, universe, "warmup", cfg.warmup)
    rows = []
    for rep in range(cfg.reps):
        tput, _, _ = _graph_trial(cfg, universe, rep, cfg.duration)
        log.info("%s P=%d x=%.2f rep %d: %.0f ops/s", cfg.structure, cfg.threads, cfg.read_fraction, rep, tput)
        rows.append(_row(cfg, rep, tput))
    rows.append(_row(cfg, "mean", statistics.fmean(r["throughput_ops_per_sec"] for r in rows)))
    return rows
