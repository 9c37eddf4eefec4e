from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parcomb.heap import InsertSet


def test_split_prefix_of_a():
    s = InsertSet([1, 2, 3])
    left, right, moved = s.split(1)
    assert left == InsertSet([1])
    assert right == InsertSet([2, 3])
    assert moved == 1


def test_split_moves_from_b_when_a_too_short():
    s = InsertSet([5], [2, 4])
    left, right, moved = s.split(2)
    assert left == InsertSet([], [2, 4])
    assert right == InsertSet([5])
    assert moved == 1


@pytest.mark.parametrize("left", [0, 3, -1])
def test_split_out_of_range(left):
    with pytest.raises(ValueError):
        InsertSet([1, 2], [3]).split(left)


def test_head_and_pop_min():
    s = InsertSet([3, 8], [1, 9])
    assert s.head() == 1
    assert [s.pop_min() for _ in range(4)] == [1, 3, 8, 9]
    assert s.head() == float("inf")


def test_sole():
    assert InsertSet([], [4]).sole() == 4


sorted_lists = st.lists(st.integers(-20, 20), max_size=12).map(sorted)


@given(sorted_lists, sorted_lists, st.data())
def test_split_contract(a, b, data):
    s = InsertSet(a, b)
    size = len(s)
    if size < 2:
        return
    left = data.draw(st.integers(1, size - 1))
    l_part, r_part, moved = s.split(left)
    assert len(l_part) == left and len(r_part) == size - left
    assert moved == min(left, size - left)
    assert l_part.is_sorted() and r_part.is_sorted()
    merged = sorted([*l_part.a, *l_part.b, *r_part.a, *r_part.b])
    assert merged == sorted(a + b)


@given(sorted_lists, sorted_lists)
def test_split_size_minus_one_moves_at_most_one(a, b):
    s = InsertSet(a, b)
    if len(s) >= 2:
        assert s.split(len(s) - 1)[2] <= 1
