"""Per-phase oracles for the batched heap and the read-optimized wrapper.

Each combining phase is checked against an independent sequential model:
a ``heapq`` multiset for the priority queue, a fresh copy of the sequential
structure for the read-optimized wrapper.  Within a phase the linearization
is fixed (extracts by increasing response, then inserts; updates in
combiner order, then every read), so checking is an exact replay.
"""
from __future__ import annotations

import heapq
import math
import operator
from dataclasses import dataclass
from typing import IO, Any, Callable, Iterable

from ..heap.batched import EXTRACT_MIN, INSERT, PhaseRecord
from ..heap.state import EMPTY, HeapState

__all__ = [
    "MultisetOracle",
    "Verdict",
    "check_bounds",
    "check_final",
    "check_phase",
    "check_phases",
    "check_quiescence",
    "check_read_phase",
    "dump_log",
    "load_log",
    "split_move_bound",
    "step_bound",
]


@dataclass
class Verdict:
    ok: bool
    message: str = ""
    phase: int | None = None
    node: int | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def fail(cls, message: str, phase: int | None = None, node: int | None = None) -> Verdict:
        return cls(False, message, phase, node)


PASS = Verdict(True)


class MultisetOracle:
    """Sequential priority queue over ``heapq``, mirroring the abstract state."""

    def __init__(self, values: Iterable[Any] = ()):
        self._heap = list(values)
        heapq.heapify(self._heap)

    def __len__(self) -> int:
        return len(self._heap)

    def insert(self, x: Any) -> None:
        heapq.heappush(self._heap, x)

    def extract_min(self) -> Any:
        return heapq.heappop(self._heap) if self._heap else EMPTY

    def sorted(self) -> list[Any]:
        return sorted(self._heap)

    def copy(self) -> MultisetOracle:
        return MultisetOracle(self._heap)


def _response_key(res: Any) -> tuple:
    return (1, 0) if res is EMPTY else (0, res)


def check_phase(rec: PhaseRecord, oracle: MultisetOracle) -> Verdict:
    """Replay one phase: extracts by increasing response, then inserts.

    Passes iff every recorded response matches; ``oracle`` is advanced to
    the post-phase state.
    """
    if len(oracle) != rec.m_pre:
        return Verdict.fail(f"phase {rec.index}: pre-size {rec.m_pre} but oracle holds {len(oracle)}", rec.index)
    responses = sorted((op[2] for op in rec.ops if op[0] == EXTRACT_MIN), key=_response_key)
    smallest = oracle.sorted()[: len(responses)]
    for got in responses:
        want = oracle.extract_min()
        if got is not want and got != want:
            return Verdict.fail(
                f"phase {rec.index} (m_pre={rec.m_pre}): extract responses {responses} "
                f"but the {len(responses)} smallest were {smallest}",
                rec.index,
            )
    for op in rec.ops:
        if op[0] == INSERT:
            oracle.insert(op[1])
        elif op[0] != EXTRACT_MIN:
            return Verdict.fail(f"phase {rec.index}: unknown op {op[0]!r}", rec.index)
    return PASS


def check_phases(log: Iterable[PhaseRecord], oracle: MultisetOracle) -> Verdict:
    expected = None
    for rec in log:
        if expected is not None and rec.index != expected:
            return Verdict.fail(f"phase {rec.index} follows phase {expected - 1}", rec.index)
        expected = rec.index + 1
        v = check_phase(rec, oracle)
        if not v:
            return v
    return PASS


def check_final(h: HeapState, oracle: MultisetOracle) -> Verdict:
    got = sorted(h.values())
    want = oracle.sorted()
    if got != want:
        return Verdict.fail(f"final multiset differs: heap has {len(got)} values, oracle {len(want)}")
    return PASS


def check_quiescence(h: HeapState) -> Verdict:
    """Heap property on nodes 1..m, no lock held and no pending handoff anywhere."""
    val, m = h.val, h.m
    parents = val[1 : m // 2 + 1]
    if (
        not any(map(operator.lt, val[2 : m + 1 : 2], parents))
        and not any(map(operator.lt, val[3 : m + 1 : 2], parents))
        and True not in h.locked
        and h.split.count(None) == len(h.split)
    ):
        return PASS
    # slow path to name the offending node
    for v in range(2, m + 1):
        if val[v] < val[v // 2]:
            return Verdict.fail(f"node {v} holds {val[v]!r} below parent value {val[v // 2]!r}", node=v)
    for v in range(1, len(h.locked)):
        if h.locked[v]:
            return Verdict.fail(f"node {v} is still locked", node=v)
        if h.split[v] is not None:
            return Verdict.fail(f"node {v} has a pending InsertSet {h.split[v]!r}", node=v)
    return PASS


def split_move_bound(inserts: int) -> int:
    if inserts <= 0:
        return 0
    return inserts * (math.ceil(math.log2(inserts)) + 1)


def step_bound(m: int, batch: int) -> int:
    return math.ceil(math.log2(max(m + batch, 1))) + 1


def check_bounds(rec: PhaseRecord) -> Verdict:
    limit = split_move_bound(rec.insert_count)
    if rec.split_moves > limit:
        return Verdict.fail(
            f"phase {rec.index}: {rec.split_moves} values moved by splits, bound {limit}", rec.index
        )
    steps = step_bound(rec.m_pre, rec.batch_size)
    for op, arg, res, iterations in rec.ops:
        if iterations > steps:
            return Verdict.fail(
                f"phase {rec.index}: {op}({arg!r}) ran {iterations} loop iterations, bound {steps}", rec.index
            )
    return PASS


def check_read_phase(
    updates: list[tuple[Any, Any, Any]],
    reads: list[tuple[Any, Any, Any]],
    replica: Any,
    index: int | None = None,
    same: Callable[[Any, Any], bool] | None = None,
) -> Verdict:
    """Replay a read-optimized phase on ``replica``: updates in order, then reads."""
    same = same or _same_result
    for method, arg, res in updates:
        want = _apply(replica, method, arg)
        if not same(res, want):
            return Verdict.fail(f"phase {index}: update {method}{arg!r} returned {res!r}, replay {want!r}", index)
    for method, arg, res in reads:
        want = _apply(replica, method, arg)
        if not same(res, want):
            return Verdict.fail(f"phase {index}: read {method}{arg!r} returned {res!r}, replay {want!r}", index)
    return PASS


def _apply(structure: Any, method: Any, arg: Any) -> Any:
    try:
        return structure.apply(method, arg)
    except Exception as exc:  # errors are part of the recorded response
        return exc


def _same_result(a: Any, b: Any) -> bool:
    if isinstance(a, Exception) or isinstance(b, Exception):
        return type(a) is type(b) and a.args == b.args
    return a == b


# -- text log format ---------------------------------------------------------
#
# One line per request:
#     phase,m_pre,op,arg,res,iterations,split_moves,fallback
# ``arg`` is empty for extract_min, ``res`` is empty for insert and the
# literal EMPTY for an extract on an empty queue.  ``split_moves`` and
# ``fallback`` (0/1) are per-phase and repeated on each of its lines.

HEADER = "# phase,m_pre,op,arg,res,iterations,split_moves,fallback"


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if x is EMPTY:
        return "EMPTY"
    return repr(x)


def _parse(s: str) -> Any:
    if s == "":
        return None
    if s == "EMPTY":
        return EMPTY
    try:
        return int(s)
    except ValueError:
        return float(s)


def dump_log(log: Iterable[PhaseRecord], out: IO[str]) -> None:
    out.write(HEADER + "\n")
    for rec in log:
        for op, arg, res, iterations in rec.ops:
            out.write(
                f"{rec.index},{rec.m_pre},{op},{_fmt(arg)},{_fmt(res)},{iterations},"
                f"{rec.split_moves},{int(rec.fallback)}\n"
            )


def load_log(lines: Iterable[str]) -> list[PhaseRecord]:
    out: list[PhaseRecord] = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        phase, m_pre, op, arg, res, iterations, moves, fallback = line.split(",")
        if not out or out[-1].index != int(phase):
            out.append(PhaseRecord(int(phase), int(m_pre), [], int(moves), fallback == "1"))
        out[-1].ops.append((op, _parse(arg), _parse(res), int(iterations)))
    return out
