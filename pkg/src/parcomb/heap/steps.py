"""Client-side step machines for the parallel heap phases.

Each machine advances one protocol step per :meth:`step` call and returns
``False`` without touching shared state when it has to wait.  Threads drive
them with :func:`run` (pausing on every wait); the schedule simulator drives
the very same machines one step at a time.
"""
from __future__ import annotations

from ..combining import FINISHED, Request, pause
from .insertset import InsertSet
from .state import HeapState
from .targets import targets_in_subtree

__all__ = ["InsertDescent", "SiftDown", "run"]


class SiftDown:
    """Hand-over-hand sift-down from ``req.start``, which arrives locked."""

    __slots__ = ("h", "req", "v", "done", "iterations")

    def __init__(self, h: HeapState, req: Request):
        self.h = h
        self.req = req
        self.v = req.start
        self.done = False
        self.iterations = 0

    def key(self) -> tuple:
        return ("sift", self.v, self.done, self.iterations)

    def ready(self) -> bool:
        """Whether :meth:`step` would make progress right now."""
        h = self.h
        c = 2 * self.v
        if c > h.m:
            return True
        return not (h.locked[c] or (c + 1 <= h.m and h.locked[c + 1]))

    def _finish(self) -> None:
        self.h.locked[self.v] = False
        self.done = True
        self.req.iterations = self.iterations
        self.req.status = FINISHED

    def step(self) -> bool:
        h = self.h
        v = self.v
        m = h.m
        c = 2 * v
        if c > m:
            self._finish()
            return True
        locked = h.locked
        if locked[c] or (c + 1 <= m and locked[c + 1]):
            return False
        val = h.val
        if c + 1 <= m and val[c + 1] < val[c]:
            c += 1
        self.iterations += 1
        if val[c] < val[v]:
            val[v], val[c] = val[c], val[v]
            locked[c] = True
            locked[v] = False
            self.v = c
        else:
            self._finish()
        return True


class InsertDescent:
    """Carry an InsertSet from ``req.start`` down to one target leaf.

    Targets are ``lo .. hi`` for the current sub-phase.  At split nodes the
    right share is deposited in the right child's handoff slot for the
    client waiting there.
    """

    __slots__ = ("h", "req", "lo", "hi", "v", "s", "done", "iterations", "moved", "sink")

    def __init__(self, h: HeapState, req: Request, lo: int, hi: int, sink: list[int] | None = None):
        self.h = h
        self.sink = sink
        self.req = req
        self.lo = lo
        self.hi = hi
        self.v = req.start
        self.s: InsertSet | None = None
        self.done = False
        self.iterations = 0
        self.moved = 0

    def key(self) -> tuple:
        return ("insert", self.v, self.done, self.iterations, self.moved, None if self.s is None else self.s.key())

    def ready(self) -> bool:
        return self.s is not None or self.h.split[self.v] is not None

    def step(self) -> bool:
        h = self.h
        v = self.v
        s = self.s
        if s is None:
            s = h.split[v]
            if s is None:
                return False
            h.split[v] = None
            self.s = s
            return True
        if v >= self.lo:
            # every non-target node on the way has a smaller index than lo
            h.val[v] = s.sole()
            self.done = True
            if self.sink is not None:
                self.sink.append(self.moved)
            self.req.iterations = self.iterations
            self.req.status = FINISHED
            return True
        self.iterations += 1
        val = h.val
        least = s.head()
        if least < val[v]:
            s.pop_min()
            s.b.append(val[v])
            val[v] = least
        left = 2 * v
        in_left = targets_in_subtree(left, self.lo, self.hi)
        if in_left == 0:
            self.v = left + 1
        elif in_left == len(s):
            self.v = left
        else:
            mine, theirs, moved = s.split(in_left)
            self.moved += moved
            self.s = mine
            h.split[left + 1] = theirs
            self.v = left
        return True


def run(machine: SiftDown | InsertDescent) -> None:
    step = machine.step
    while not machine.done:
        if not step():
            pause()
