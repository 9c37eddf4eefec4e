"""Parallel batched binary heap driven by parallel combining.

A combining phase first serves all ExtractMin requests: the combiner picks
the nodes holding the |E| smallest values, hands each one to an extract
request, refills the nodes (with paired insert arguments or with values
from the end of the array) and lets every extract client sift its node down
under hand-over-hand locking.  The remaining inserts then descend from the
root carrying a sorted InsertSet that is split at every node whose two
child subtrees both receive new leaves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from ..combining import (
    FINISHED,
    SIFT,
    CombiningStructure,
    Request,
    wait_finished,
)
from .insertset import InsertSet
from .state import EMPTY, HeapState, seq_extract_min, seq_insert, select_k_smallest
from .steps import InsertDescent, SiftDown, run
from .targets import compute_insert_starts, level_chunks

__all__ = [
    "EXTRACT_MIN",
    "INSERT",
    "ParallelHeap",
    "PhaseRecord",
    "PriorityQueue",
    "SequentialHeap",
    "apply_fallback",
    "prepare_extract",
    "prepare_insert",
]

INSERT = "insert"
EXTRACT_MIN = "extract_min"


@dataclass
class PhaseRecord:
    """What happened in one combining phase, as seen by the combiner."""

    index: int
    m_pre: int
    ops: list[tuple[str, Any, Any, int]] = field(default_factory=list)  # (op, arg, res, iterations)
    split_moves: int = 0
    fallback: bool = False

    @property
    def batch_size(self) -> int:
        return len(self.ops)

    @property
    def insert_count(self) -> int:
        return sum(1 for op in self.ops if op[0] == INSERT)


def apply_fallback(h: HeapState, batch: list[Request]) -> None:
    """Serve a batch sequentially: extracts in scan order, then inserts."""
    for r in batch:
        if r.method == EXTRACT_MIN:
            r.res = seq_extract_min(h) if h.m else EMPTY
    for r in batch:
        if r.method == INSERT:
            seq_insert(h, r.input)


def prepare_extract(h: HeapState, extracts: list[Request], inserts: list[Request]) -> list[Request]:
    """Combiner side of the extract phase.

    Assigns responses and start nodes, refills the chosen nodes and returns
    the inserts left unpaired.  Statuses are not touched.
    """
    chosen = select_k_smallest(h, len(extracts))
    val, locked = h.val, h.locked
    for r, v in zip(extracts, chosen):
        r.res = val[v]
        r.start = v
        locked[v] = True
    paired = min(len(extracts), len(inserts))
    for i in range(paired):
        val[chosen[i]] = inserts[i].input
    holes = chosen[paired:]
    if holes:
        # Shrink by len(holes).  Holes beyond the new end just disappear;
        # holes inside it take the surviving values from the cut-off tail.
        m = h.m
        new_m = m - len(holes)
        hole_set = set(holes)
        inside = sorted(v for v in holes if v <= new_m)
        tail = (t for t in range(new_m + 1, m + 1) if t not in hole_set)
        for v, t in zip(inside, tail):
            val[v] = val[t]
        h.m = new_m
    return inserts[paired:]


def prepare_insert(h: HeapState, inserts: list[Request]) -> tuple[int, int]:
    """Combiner side of one single-level insert sub-phase.

    Sets start nodes, grows the heap, deposits the sorted arguments at the
    root and returns the target range.  Statuses are not touched.
    """
    m = h.m
    n = len(inserts)
    lo, hi = m + 1, m + n
    for r, (start, leaf_lo, leaf_hi) in zip(inserts, compute_insert_starts(m, n)):
        r.start = start
        r.leaf_lo = leaf_lo
        r.leaf_hi = leaf_hi
    h.ensure_capacity(hi)
    h.m = hi
    h.split[1] = InsertSet(sorted(r.input for r in inserts))
    return lo, hi


def insert_subphases(m: int, inserts: list[Request]) -> list[list[Request]]:
    out = []
    pos = 0
    for _, size in level_chunks(m, len(inserts)):
        out.append(inserts[pos : pos + size])
        pos += size
    return out


class ParallelHeap:
    """COMBINER_CODE / CLIENT_CODE pair for the batched heap.

    ``record_log`` keeps a :class:`PhaseRecord` per phase; ``on_phase`` is
    called with the heap and the record at every phase boundary (used for
    quiescence checks).
    """

    def __init__(
        self,
        h: HeapState | None = None,
        record_log: bool = False,
        on_phase: Callable[[HeapState, PhaseRecord], None] | None = None,
    ):
        self.h = h if h is not None else HeapState()
        self.record_log = record_log
        self.on_phase = on_phase
        self.log: list[PhaseRecord] = []
        self.phase_index = 0
        # bounds of the running insert sub-phase, read by insert clients
        self.target_lo = 0
        self.target_hi = 0
        self._moves: list[int] = []

    def combiner_code(self, requests: list[Request], own: Request) -> None:
        h = self.h
        m_pre = h.m
        moves = 0
        fallback = m_pre <= len(requests)
        if fallback:
            apply_fallback(h, requests)
            for r in requests:
                r.status = FINISHED
        else:
            extracts = [r for r in requests if r.method == EXTRACT_MIN]
            inserts = [r for r in requests if r.method == INSERT]
            moves = self._extract_phase(extracts, inserts, own)
        if self.record_log or self.on_phase is not None:
            rec = PhaseRecord(
                self.phase_index,
                m_pre,
                [(r.method, r.input, r.res, r.iterations) for r in requests],
                moves,
                fallback,
            )
            if self.record_log:
                self.log.append(rec)
            if self.on_phase is not None:
                self.on_phase(h, rec)
        self.phase_index += 1

    def _extract_phase(self, extracts: list[Request], inserts: list[Request], own: Request) -> int:
        h = self.h
        rest = prepare_extract(h, extracts, inserts)
        for r in inserts[: len(inserts) - len(rest)]:
            r.status = FINISHED
        for r in extracts:
            r.status = SIFT
        if own.method == EXTRACT_MIN:
            run(SiftDown(h, own))
        wait_finished(extracts)
        moves = self._moves
        moves.clear()
        for chunk in insert_subphases(h.m, rest):
            self.target_lo, self.target_hi = prepare_insert(h, chunk)
            for r in chunk:
                r.status = SIFT
            if own.status is SIFT and own.method == INSERT:
                run(InsertDescent(h, own, self.target_lo, self.target_hi, moves))
            wait_finished(chunk)
        return sum(moves)

    def client_code(self, req: Request) -> None:
        if req.status is not SIFT:
            return
        if req.method == EXTRACT_MIN:
            run(SiftDown(self.h, req))
        else:
            run(InsertDescent(self.h, req, self.target_lo, self.target_hi, self._moves))


class SequentialHeap:
    """Sequential-combining baseline: the combiner serves the whole batch."""

    def __init__(self, h: HeapState | None = None, record_log: bool = False, on_phase=None):
        self.h = h if h is not None else HeapState()
        self.record_log = record_log
        self.on_phase = on_phase
        self.log: list[PhaseRecord] = []
        self.phase_index = 0

    def combiner_code(self, requests: list[Request], own: Request) -> None:
        m_pre = self.h.m
        apply_fallback(self.h, requests)
        if self.record_log or self.on_phase is not None:
            rec = PhaseRecord(self.phase_index, m_pre, [(r.method, r.input, r.res, 0) for r in requests], 0, True)
            if self.record_log:
                self.log.append(rec)
            if self.on_phase is not None:
                self.on_phase(self.h, rec)
        for r in requests:
            r.status = FINISHED
        self.phase_index += 1

    def client_code(self, req: Request) -> None:
        pass


class PriorityQueue:
    """Concurrent min-priority queue over a combining structure.

    ``mode`` is ``"parallel"`` (clients take part in every phase) or
    ``"sequential"`` (plain flat combining).  ``extract_min`` returns
    :data:`EMPTY` when the queue is empty.
    """

    def __init__(
        self,
        values: Iterable[Any] = (),
        mode: str = "parallel",
        record_log: bool = False,
        on_phase: Callable[[HeapState, PhaseRecord], None] | None = None,
    ):
        h = HeapState(values)
        if mode == "parallel":
            self.behavior: ParallelHeap | SequentialHeap = ParallelHeap(h, record_log, on_phase)
        elif mode == "sequential":
            self.behavior = SequentialHeap(h, record_log, on_phase)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        self.combining = CombiningStructure()

    @property
    def heap(self) -> HeapState:
        return self.behavior.h

    @property
    def log(self) -> list[PhaseRecord]:
        return self.behavior.log

    def insert(self, x: Any) -> None:
        self.combining.execute(INSERT, x, self.behavior)

    def extract_min(self) -> Any:
        return self.combining.execute(EXTRACT_MIN, None, self.behavior)

    def __len__(self) -> int:
        return self.behavior.h.m
