from __future__ import annotations

from collections import deque
from typing import Any, Iterable

__all__ = ["InsertSet"]

_INF = float("inf")


class InsertSet:
    """Values still to be placed below a node during the insert phase.

    ``a`` holds pending insert arguments, ``b`` holds values displaced from
    ancestors on the way down.  Both stay sorted ascending.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Iterable[Any] = (), b: Iterable[Any] = ()):
        self.a = deque(a)
        self.b = deque(b)

    def __len__(self) -> int:
        return len(self.a) + len(self.b)

    def __repr__(self) -> str:
        return f"InsertSet(a={list(self.a)}, b={list(self.b)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InsertSet):
            return NotImplemented
        return list(self.a) == list(other.a) and list(self.b) == list(other.b)

    def key(self) -> tuple:
        return tuple(self.a), tuple(self.b)

    def head(self) -> Any:
        """Smallest value; an empty side compares as +inf."""
        a = self.a[0] if self.a else _INF
        b = self.b[0] if self.b else _INF
        return a if not b < a else b

    def pop_min(self) -> Any:
        a, b = self.a, self.b
        if b and (not a or b[0] < a[0]):
            return b.popleft()
        return a.popleft()

    def sole(self) -> Any:
        assert len(self) == 1, self
        return self.a[0] if self.a else self.b[0]

    def is_sorted(self) -> bool:
        return all(not y < x for seq in (self.a, self.b) for x, y in zip(seq, list(seq)[1:]))

    def split(self, left: int) -> tuple[InsertSet, InsertSet, int]:
        """Split into parts of sizes ``left`` and ``len(self) - left``.

        Moves only ``min(left, len - left)`` values: a prefix of ``a`` if it
        is long enough, otherwise a prefix of ``b``, into a fresh set that
        becomes the smaller side.  ``self`` is reused as the larger side.
        Returns ``(left_part, right_part, moved)``.
        """
        size = len(self)
        if not 1 <= left < size:
            raise ValueError(f"split({left}) of a set of size {size}")
        moved = min(left, size - left)
        fresh = InsertSet()
        if len(self.a) >= moved:
            src, dst = self.a, fresh.a
        else:
            src, dst = self.b, fresh.b
        for _ in range(moved):
            dst.append(src.popleft())
        if moved == left:
            return fresh, self, moved
        return self, fresh, moved
