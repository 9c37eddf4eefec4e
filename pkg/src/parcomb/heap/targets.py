"""Index arithmetic for the insert phase on a 1-indexed complete binary tree."""
from __future__ import annotations

__all__ = ["compute_insert_starts", "level_chunks", "subtree_range", "targets_in_subtree"]


def depth(v: int) -> int:
    return v.bit_length() - 1


def subtree_range(v: int, level: int) -> tuple[int, int]:
    """Indices of ``v``'s subtree on depth ``level`` (may be empty: lo > hi)."""
    d = level - depth(v)
    if d < 0:
        return 1, 0
    return v << d, ((v + 1) << d) - 1


def targets_in_subtree(v: int, lo: int, hi: int) -> int:
    """Number of target indices in ``[lo, hi]`` that lie in ``v``'s subtree.

    Exact for target ranges spanning up to two depth levels.
    """
    if lo > hi:
        return 0
    count = 0
    for level in range(depth(lo), depth(hi) + 1):
        a, b = subtree_range(v, level)
        a = max(a, lo)
        b = min(b, hi)
        if a <= b:
            count += b - a + 1
    return count


def level_chunks(m: int, count: int) -> list[tuple[int, int]]:
    """Split targets ``m+1 .. m+count`` into runs that each sit on one level.

    Returns ``(first_target, size)`` pairs; at most two when ``count <= m + 1``.
    """
    out = []
    lo, hi = m + 1, m + count
    while lo <= hi:
        level_end = (1 << lo.bit_length()) - 1
        end = min(hi, level_end)
        out.append((lo, end - lo + 1))
        lo = end + 1
    return out


def compute_insert_starts(m: int, count: int) -> list[tuple[int, int, int]]:
    """Start node and deepest-level leaf range for each of ``count`` inserts.

    The first insert starts at the root.  Insert ``i >= 2`` starts at the
    right child of the lowest common ancestor of targets ``m+i-1`` and
    ``m+i``: walk up from ``m+i-1`` while on a right child; the walk stops on
    a left child whose sibling is the start.  Running off the root means the
    two targets straddle a level boundary and the ancestor is the root.
    """
    if count <= 0:
        return []
    deepest = depth(m + count)
    starts = [1]
    for i in range(2, count + 1):
        t = m + i - 1
        while t > 1 and t & 1:
            t >>= 1
        starts.append(3 if t == 1 else t + 1)
    return [(s, *subtree_range(s, deepest)) for s in starts]
