"""Flat-combining request set and the generic parallel-combining driver.

Every operation is published as a :class:`Request` in the calling thread's
publication record.  Whoever wins the one-word combiner lock collects all
pending requests and runs the behavior's combiner code; everyone else spins
until the combiner hands their request over (status leaves ``INITIAL``) and
then runs the behavior's client code.

Cross-thread fields are plain attribute stores.  Under the interpreter lock
each store is a single atomic word write and is visible to any thread that
subsequently observes a later store, which is the release/acquire contract
the heap and read-optimized protocols rely on.
"""
from __future__ import annotations

import enum
import os
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Protocol

__all__ = [
    "CLIENT",
    "COMBINER",
    "CombinerClientBehavior",
    "CombiningStructure",
    "PublicationRecord",
    "Request",
    "RequestStatus",
    "Role",
    "SequentialCombining",
    "pause",
    "wait_finished",
]

# Releases the interpreter lock and yields the core. time.sleep(0) does not
# hand the lock over reliably and costs milliseconds per handoff.
pause = os.sched_yield


class RequestStatus(enum.IntEnum):
    INITIAL = 0
    STARTED = 1
    SIFT = 2
    FINISHED = 3


INITIAL = RequestStatus.INITIAL
STARTED = RequestStatus.STARTED
SIFT = RequestStatus.SIFT
FINISHED = RequestStatus.FINISHED


class Role(enum.Enum):
    COMBINER = "combiner"
    CLIENT = "client"


COMBINER = Role.COMBINER
CLIENT = Role.CLIENT


class Request:
    """A published operation descriptor.

    ``start``, ``leaf_lo`` and ``leaf_hi`` are routing fields for the heap
    protocol, written by the combiner before the status leaves ``INITIAL``.
    ``iterations`` counts client loop iterations for the bound checks.
    """

    __slots__ = ("method", "input", "res", "status", "start", "leaf_lo", "leaf_hi", "iterations")

    def __init__(self, method: Any, input: Any = None):
        self.method = method
        self.input = input
        self.res: Any = None
        self.status = INITIAL
        self.start = 0
        self.leaf_lo = 0
        self.leaf_hi = 0
        self.iterations = 0

    def __repr__(self) -> str:
        return f"Request({self.method!r}, {self.input!r}, res={self.res!r}, status={self.status.name})"


@dataclass(eq=False)
class PublicationRecord:
    owner: Any
    req: Request | None = None
    active: bool = True
    next: PublicationRecord | None = field(default=None, repr=False)


class CombinerClientBehavior(Protocol):
    def combiner_code(self, requests: list[Request], own: Request) -> None: ...

    def client_code(self, req: Request) -> None: ...


def wait_finished(requests: Iterable[Request]) -> None:
    for r in requests:
        while r.status is not FINISHED:
            pause()


class CombiningStructure:
    """Publication list with a test-and-set combiner lock.

    Records are registered once per thread and never evicted.  One full
    scan of the list per combining phase.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._head: PublicationRecord | None = None
        self._register_lock = threading.Lock()
        self._local = threading.local()
        self._holder: int | None = None
        # instrumentation
        self.in_combiner = 0
        self.max_in_combiner = 0
        self.phases = 0

    # -- publication list -------------------------------------------------
    def register(self, owner: Any = None) -> PublicationRecord:
        rec = PublicationRecord(owner if owner is not None else threading.get_ident())
        with self._register_lock:
            rec.next = self._head
            self._head = rec
        return rec

    def record(self) -> PublicationRecord:
        """The calling thread's publication record, registered on first use."""
        rec = getattr(self._local, "record", None)
        if rec is None:
            rec = self._local.record = self.register()
        return rec

    def records(self) -> list[PublicationRecord]:
        out = []
        rec = self._head
        while rec is not None:
            out.append(rec)
            rec = rec.next
        return out

    # -- request set interface --------------------------------------------
    def add_request(self, req: Request, record: PublicationRecord) -> Role:
        assert req.status is INITIAL
        pending = record.req
        assert pending is None or pending.status is FINISHED, "record already has a pending request"
        record.req = req
        return COMBINER if self.try_acquire() else CLIENT

    def try_acquire(self) -> bool:
        if self._lock.acquire(False):
            self._holder = threading.get_ident()
            return True
        return False

    @property
    def locked(self) -> bool:
        return self._lock.locked()

    def get_requests(self) -> list[Request]:
        batch = []
        rec = self._head
        while rec is not None:
            r = rec.req
            if r is not None and r.status is INITIAL:
                batch.append(r)
            rec = rec.next
        return batch

    def release(self) -> None:
        if not self._lock.locked():
            raise RuntimeError("release() called without holding the combiner role")
        self._holder = None
        self._lock.release()

    # -- driver ------------------------------------------------------------
    def execute(self, method: Any, input: Any, behavior: CombinerClientBehavior) -> Any:
        req = Request(method, input)
        role = self.add_request(req, self.record())
        while role is CLIENT:
            if req.status is not INITIAL:
                behavior.client_code(req)
                return req.res
            pause()
            # a combiner that scanned before our publish has no way to see us
            if not self._lock.locked() and self.try_acquire():
                role = COMBINER
        try:
            # a previous combiner may have served us before releasing
            if req.status is INITIAL:
                self.run_phase(req, behavior)
        finally:
            self.release()
        return req.res

    def run_phase(self, own: Request, behavior: CombinerClientBehavior) -> None:
        batch = self.get_requests()
        assert batch, "combiner scan returned no requests"
        self.in_combiner += 1
        if self.in_combiner > self.max_in_combiner:
            self.max_in_combiner = self.in_combiner
        try:
            behavior.combiner_code(batch, own)
            self.phases += 1
        finally:
            self.in_combiner -= 1


class SequentialCombining:
    """Degenerate behavior: the combiner serves everything, clients do nothing.

    ``apply`` is called as ``apply(method, input)`` for each request in scan
    order; ``on_phase`` (if given) receives the served batch afterwards.
    """

    def __init__(self, apply: Callable[[Any, Any], Any], on_phase: Callable[[list[Request]], None] | None = None):
        self.apply = apply
        self.on_phase = on_phase

    def combiner_code(self, requests: list[Request], own: Request) -> None:
        for r in requests:
            r.res = self.apply(r.method, r.input)
            r.status = FINISHED
        if self.on_phase is not None:
            self.on_phase(requests)

    def client_code(self, req: Request) -> None:
        pass
