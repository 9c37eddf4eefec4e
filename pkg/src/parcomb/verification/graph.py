from __future__ import annotations

from typing import Any, Iterable

from ..read_optimized import ReadPhaseRecord
from .oracle import Verdict, check_read_phase

__all__ = ["UnionFind", "check_read_log", "components_oracle"]


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]


def components_oracle(n: int, edges: Iterable[tuple[int, int]]) -> UnionFind:
    """Connectivity rebuilt from scratch over the current edge set."""
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    return uf


def check_read_log(log: Iterable[ReadPhaseRecord], replica: Any) -> Verdict:
    """Replay every phase on ``replica`` (a copy of the initial structure)."""
    expected = None
    for rec in log:
        if expected is not None and rec.index != expected:
            return Verdict.fail(f"phase {rec.index} follows phase {expected - 1}", rec.index)
        expected = rec.index + 1
        v = check_read_phase(rec.updates, rec.reads, replica, rec.index)
        if not v:
            return v
    return Verdict(True)
