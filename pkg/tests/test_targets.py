from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from parcomb.heap.targets import compute_insert_starts, level_chunks, subtree_range, targets_in_subtree


def _ancestors(v):
    out = []
    while v:
        out.append(v)
        v //= 2
    return out


def _lca(a, b):
    up = set(_ancestors(a))
    return next(v for v in _ancestors(b) if v in up)


def _brute_starts(m, count):
    """Start of insert i is the right child of lca(target i-1, target i)."""
    starts = [1]
    for i in range(2, count + 1):
        starts.append(2 * _lca(m + i - 1, m + i) + 1)
    return starts


def test_starts_m8_four_inserts():
    got = compute_insert_starts(8, 4)
    assert [s for s, _, _ in got] == [1, 5, 11, 3]
    lcas = {_lca(8 + i - 1, 8 + i) for i in range(2, 5)}
    assert lcas == {2, 5, 1}


def test_single_insert_starts_at_root():
    assert [s for s, _, _ in compute_insert_starts(5, 1)] == [1]


def test_levels_cross_m6():
    assert [s for s, _, _ in compute_insert_starts(6, 2)] == [1, 3]


def test_leaf_ranges_are_deepest_level():
    assert compute_insert_starts(8, 4)[1] == (5, 10, 11)
    assert compute_insert_starts(8, 4)[0] == (1, 8, 15)


@given(st.integers(0, 300), st.integers(1, 40))
def test_starts_match_brute_force_lca(m, count):
    # within one level, or a crossing of at most one boundary
    got = [s for s, _, _ in compute_insert_starts(m, count)]
    assert got == _brute_starts(m, count)


def test_targets_in_subtree_examples():
    assert targets_in_subtree(2, 9, 12) == 3
    assert targets_in_subtree(3, 7, 8) == 1
    assert targets_in_subtree(1, 9, 12) == 4


@given(st.integers(1, 64), st.integers(1, 200), st.integers(0, 60))
def test_targets_in_subtree_matches_enumeration(v, lo, extra):
    hi = lo + extra
    if hi.bit_length() - lo.bit_length() > 1:
        return
    want = sum(1 for t in range(lo, hi + 1) if v in _ancestors(t))
    assert targets_in_subtree(v, lo, hi) == want


def test_subtree_range():
    assert subtree_range(2, 3) == (8, 11)
    lo, hi = subtree_range(5, 1)
    assert lo > hi


def test_level_chunks():
    assert level_chunks(6, 2) == [(7, 1), (8, 1)]
    assert level_chunks(8, 4) == [(9, 4)]
    assert level_chunks(0, 3) == [(1, 1), (2, 2)]
