"""Array-backed binary heap state and the sequential Gonnet-Munro operations.

Nodes are 1-indexed; node ``v`` has children ``2v`` and ``2v + 1``.  Each
node's three fields (value, lock flag, InsertSet handoff slot) live in
parallel lists so the hot loops index plain lists.
"""
from __future__ import annotations

import heapq
from typing import Any, Iterable

__all__ = ["EMPTY", "EmptyQueue", "HeapState", "seq_extract_min", "seq_insert", "select_k_smallest"]


class _Empty:
    __slots__ = ()

    def __repr__(self) -> str:
        return "EMPTY"

    def __reduce__(self):
        return "EMPTY"


EMPTY = _Empty()
"""Response of ExtractMin on an empty queue."""


class EmptyQueue(IndexError):
    pass


class HeapState:
    def __init__(self, values: Iterable[Any] = ()):
        self.m = 0
        self.val: list[Any] = [None]
        self.locked: list[bool] = [False]
        self.split: list[Any] = [None]
        for x in values:
            seq_insert(self, x)

    @classmethod
    def from_array(cls, values: Iterable[Any]) -> HeapState:
        """Wrap ``values`` as nodes 1..n without reordering them."""
        h = cls()
        vals = list(values)
        h.ensure_capacity(len(vals))
        h.val[1 : len(vals) + 1] = vals
        h.m = len(vals)
        return h

    def ensure_capacity(self, n: int) -> None:
        # only the combiner grows the arrays, so no concurrent resize
        short = n + 1 - len(self.val)
        if short > 0:
            grow = max(short, len(self.val))
            self.val.extend([None] * grow)
            self.locked.extend([False] * grow)
            self.split.extend([None] * grow)

    def values(self) -> list[Any]:
        return self.val[1 : self.m + 1]

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"HeapState(m={self.m}, {self.values()})"

    def heap_property_holds(self) -> bool:
        val, m = self.val, self.m
        return all(not val[c] < val[c // 2] for c in range(2, m + 1))


def seq_insert(h: HeapState, x: Any) -> None:
    """Top-down insertion along the root-to-new-leaf path."""
    h.m += 1
    m = h.m
    h.ensure_capacity(m)
    val = h.val
    v = 1
    # bits of m below the leading one spell the path from the root
    for shift in range(m.bit_length() - 2, -1, -1):
        if x < val[v]:
            val[v], x = x, val[v]
        v = 2 * v + ((m >> shift) & 1)
    val[v] = x


def seq_extract_min(h: HeapState) -> Any:
    if h.m == 0:
        raise EmptyQueue("extract_min from an empty heap")
    val = h.val
    m = h.m
    res = val[1]
    x = val[m]
    val[m] = None
    m -= 1
    h.m = m
    if m == 0:
        return res
    v = 1
    while True:
        c = 2 * v
        if c > m:
            break
        if c + 1 <= m and val[c + 1] < val[c]:
            c += 1
        if not val[c] < x:
            break
        val[v] = val[c]
        v = c
    val[v] = x
    return res


def select_k_smallest(h: HeapState, k: int) -> list[int]:
    """Indices of the ``k`` smallest values, in increasing order of value.

    Frontier search from the root over an auxiliary min-heap of
    ``(value, index)`` pairs; the chosen indices always form a subtree
    containing the root.
    """
    m = h.m
    if not 0 <= k <= m:
        raise ValueError(f"cannot select {k} of {m} nodes")
    if k == 0:
        return []
    val = h.val
    frontier = [(val[1], 1)]
    out = []
    while len(out) < k:
        _, v = heapq.heappop(frontier)
        out.append(v)
        c = 2 * v
        if c <= m:
            heapq.heappush(frontier, (val[c], c))
            if c + 1 <= m:
                heapq.heappush(frontier, (val[c + 1], c + 1))
    return out
