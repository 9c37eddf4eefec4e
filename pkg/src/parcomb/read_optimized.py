"""Read-optimized concurrent wrapper over any sequential structure.

The combiner applies a phase's updates itself, then releases every read of
the phase at once; the readers run concurrently on the (now unchanging)
structure and report back.  A read takes effect when its request is
released, so it sees every update of its own and earlier phases.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Protocol

from .combining import FINISHED, STARTED, CombiningStructure, Request, pause

__all__ = [
    "ADD_EDGE",
    "CONNECTED",
    "GraphDemo",
    "ReadOptimized",
    "ReadPhaseRecord",
    "REMOVE_EDGE",
    "SequentialStructure",
]


class SequentialStructure(Protocol):
    def apply(self, method: Any, input: Any) -> Any: ...

    def is_update(self, method: Any) -> bool: ...


@dataclass
class ReadPhaseRecord:
    index: int
    updates: list[tuple[Any, Any, Any]] = field(default_factory=list)
    reads: list[tuple[Any, Any, Any]] = field(default_factory=list)


class ReadOptimized:
    """Linearizable concurrent front end for a sequential structure.

    With ``check_reads`` the combiner compares ``state_hash()`` of the
    structure before releasing the reads and after the last one finishes;
    any difference is counted in ``read_mutations``.
    """

    def __init__(
        self,
        structure: SequentialStructure,
        record_log: bool = False,
        check_reads: bool = False,
        state_hash: Callable[[], Hashable] | None = None,
    ):
        self.d = structure
        self.combining = CombiningStructure()
        self.record_log = record_log
        self.log: list[ReadPhaseRecord] = []
        self.check_reads = check_reads
        self.state_hash = state_hash or getattr(structure, "state_hash", None)
        self.phase_index = 0
        # instrumentation
        self.started_flips = 0
        self.read_mutations = 0

    def execute(self, method: Any, input: Any = None) -> Any:
        res = self.combining.execute(method, input, self)
        if isinstance(res, Exception):
            raise res
        return res

    def _apply(self, req: Request) -> None:
        try:
            req.res = self.d.apply(req.method, req.input)
        except Exception as exc:
            req.res = exc

    def combiner_code(self, requests: list[Request], own: Request) -> None:
        d = self.d
        reads = []
        for r in requests:
            if d.is_update(r.method):
                self._apply(r)
                r.status = FINISHED
            else:
                reads.append(r)
        before = self.state_hash() if self.check_reads and reads else None
        for r in reads:
            r.status = STARTED
        self.started_flips += len(reads)
        if own.status is STARTED:
            self._apply(own)
            own.status = FINISHED
        for r in reads:
            while r.status is STARTED:
                pause()
        if before is not None and self.state_hash() != before:
            self.read_mutations += 1
        if self.record_log:
            self.log.append(
                ReadPhaseRecord(
                    self.phase_index,
                    [(r.method, r.input, r.res) for r in requests if d.is_update(r.method)],
                    [(r.method, r.input, r.res) for r in reads],
                )
            )
        self.phase_index += 1

    def client_code(self, req: Request) -> None:
        # updates were finished by the combiner
        if req.status is STARTED:
            self._apply(req)
            req.status = FINISHED


ADD_EDGE = "add_edge"
REMOVE_EDGE = "remove_edge"
CONNECTED = "connected"


class GraphDemo:
    """Undirected graph on vertices ``0..n-1`` with BFS connectivity queries."""

    def __init__(self, n: int, edges: Any = ()):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range: ({u}, {v})")

    def add_edge(self, u: int, v: int) -> bool:
        self._check(u, v)
        if u == v:
            raise ValueError(f"self-loop ({u}, {v})")
        if v in self.adj[u]:
            return False
        self.adj[u].add(v)
        self.adj[v].add(u)
        return True

    def remove_edge(self, u: int, v: int) -> bool:
        self._check(u, v)
        if u == v:
            raise ValueError(f"self-loop ({u}, {v})")
        if v not in self.adj[u]:
            return False
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        return True

    def connected(self, u: int, v: int) -> bool:
        self._check(u, v)
        if u == v:
            return True
        adj = self.adj
        seen = {u}
        queue = deque((u,))
        while queue:
            for w in adj[queue.popleft()]:
                if w == v:
                    return True
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return False

    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for u in range(self.n) for v in self.adj[u] if u < v}

    def state_hash(self) -> int:
        return hash(frozenset(self.edges()))

    def copy(self) -> GraphDemo:
        g = GraphDemo(self.n)
        g.adj = [set(s) for s in self.adj]
        return g

    # SequentialStructure
    _methods = {ADD_EDGE: add_edge, REMOVE_EDGE: remove_edge, CONNECTED: connected}

    def apply(self, method: str, input: tuple[int, int]) -> Any:
        try:
            fn = self._methods[method]
        except KeyError:
            raise ValueError(f"unknown method {method!r}") from None
        return fn(self, *input)

    def is_update(self, method: str) -> bool:
        return method != CONNECTED
