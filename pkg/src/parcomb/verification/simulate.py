"""Deterministic single-threaded execution of one heap combining phase.

:class:`PhaseSim` reproduces the combiner's side of a phase step by step
and exposes the client step machines, so a scheduler picks which client
moves next.  :func:`simulate_schedules` explores every interleaving of the
clients by depth-first search over simulator states (states reached by
different interleavings are merged), and :func:`run_phase` follows one
seeded random schedule.
"""
from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from ..combining import FINISHED, SIFT, Request
from ..heap.batched import (
    EXTRACT_MIN,
    INSERT,
    PhaseRecord,
    apply_fallback,
    insert_subphases,
    prepare_extract,
    prepare_insert,
)
from ..heap.state import HeapState
from ..heap.steps import InsertDescent, SiftDown
from .oracle import MultisetOracle, Verdict, check_bounds, check_final, check_phase, check_quiescence

__all__ = ["PhaseSim", "SimConfig", "SimResult", "replay", "run_phase", "simulate_schedules"]

Op = tuple[str, Any]


class PhaseSim:
    def __init__(self, h: HeapState, ops: Sequence[Op], index: int = 0):
        self.h = h
        self.index = index
        self.m_pre = h.m
        self.reqs = [Request(method, arg) for method, arg in ops]
        self.moves: list[int] = []
        self.machines: list[SiftDown | InsertDescent] = []
        self.chunks: list[list[Request]] = []
        self.fallback = self.m_pre <= len(self.reqs)
        self.stage = 0
        if self.fallback:
            apply_fallback(h, self.reqs)
            for r in self.reqs:
                r.status = FINISHED
            return
        extracts = [r for r in self.reqs if r.method == EXTRACT_MIN]
        inserts = [r for r in self.reqs if r.method == INSERT]
        rest = prepare_extract(h, extracts, inserts)
        for r in inserts[: len(inserts) - len(rest)]:
            r.status = FINISHED
        for r in extracts:
            r.status = SIFT
        self.machines = [SiftDown(h, r) for r in extracts]
        self.chunks = insert_subphases(h.m, rest)
        self._advance()

    def _advance(self) -> None:
        """Run combiner code between client stages once every machine is done."""
        while all(mc.done for mc in self.machines) and self.chunks:
            chunk = self.chunks.pop(0)
            lo, hi = prepare_insert(self.h, chunk)
            for r in chunk:
                r.status = SIFT
            self.machines = [InsertDescent(self.h, r, lo, hi, self.moves) for r in chunk]
            self.stage += 1

    @property
    def finished(self) -> bool:
        return not self.chunks and all(mc.done for mc in self.machines)

    def enabled(self) -> list[int]:
        return [i for i, mc in enumerate(self.machines) if not mc.done and mc.ready()]

    def step(self, i: int) -> None:
        progressed = self.machines[i].step()
        assert progressed, f"client {i} was not enabled"
        self._advance()

    def key(self) -> tuple:
        h = self.h
        return (
            self.stage,
            h.m,
            tuple(h.val),
            tuple(h.locked),
            tuple(None if s is None else s.key() for s in h.split),
            tuple(mc.key() for mc in self.machines),
        )

    def record(self) -> PhaseRecord:
        return PhaseRecord(
            self.index,
            self.m_pre,
            [(r.method, r.input, r.res, r.iterations) for r in self.reqs],
            sum(self.moves),
            self.fallback,
        )

    def verify(self, oracle: MultisetOracle) -> Verdict:
        """Check a finished phase; ``oracle`` must hold the pre-phase multiset."""
        if not all(r.status is FINISHED for r in self.reqs):
            return Verdict.fail("phase ended with unfinished requests")
        rec = self.record()
        for check in (lambda: check_phase(rec, oracle), lambda: check_final(self.h, oracle),
                      lambda: check_quiescence(self.h), lambda: check_bounds(rec)):
            v = check()
            if not v:
                return v
        return Verdict(True)


@dataclass
class SimConfig:
    heap: list[Any]
    ops: list[Op]
    as_array: bool = False  # take ``heap`` as the node array instead of inserting it


@dataclass
class SimResult:
    ok: bool
    states: int = 0
    terminals: int = 0
    message: str = ""
    schedule: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _initial(cfg: SimConfig) -> PhaseSim:
    h = HeapState.from_array(cfg.heap) if cfg.as_array else HeapState(cfg.heap)
    return PhaseSim(h, cfg.ops)


def _pre_values(cfg: SimConfig) -> list[Any]:
    return list(cfg.heap)


def simulate_schedules(cfg: SimConfig) -> SimResult:
    """Explore every client interleaving of one phase.

    Fails on a state where unfinished clients exist but none can move, or
    on a terminal state that breaks the phase oracle, quiescence or the
    step bounds.  The failing schedule is a list of client indices that
    :func:`replay` reproduces.
    """
    root = _initial(cfg)
    pre = MultisetOracle(_pre_values(cfg))
    seen: set[tuple] = set()
    result = SimResult(True)
    stack: list[tuple[PhaseSim, list[int]]] = [(root, [])]
    while stack:
        sim, path = stack.pop()
        k = sim.key()
        if k in seen:
            continue
        seen.add(k)
        result.states += 1
        if sim.finished:
            result.terminals += 1
            v = sim.verify(pre.copy())
            if not v:
                return SimResult(False, result.states, result.terminals, v.message, path)
            continue
        moves = sim.enabled()
        if not moves:
            return SimResult(False, result.states, result.terminals, "no client can move", path)
        for i in moves:
            nxt = copy.deepcopy(sim)
            nxt.step(i)
            stack.append((nxt, path + [i]))
    return result


def replay(cfg: SimConfig, schedule: Sequence[int]) -> PhaseSim:
    sim = _initial(cfg)
    for i in schedule:
        sim.step(i)
    return sim


def run_phase(h: HeapState, ops: Sequence[Op], rng: random.Random, index: int = 0) -> PhaseRecord:
    """Apply one phase to ``h`` under a random client schedule."""
    sim = PhaseSim(h, ops, index)
    while not sim.finished:
        moves = sim.enabled()
        if not moves:
            raise RuntimeError(f"phase {index}: no client can move")
        sim.step(rng.choice(moves))
    return sim.record()
