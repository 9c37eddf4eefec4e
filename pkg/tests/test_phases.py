from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parcomb.combining import FINISHED, SIFT, Request
from parcomb.heap import (
    EMPTY,
    EXTRACT_MIN,
    INSERT,
    HeapState,
    InsertDescent,
    SiftDown,
    apply_fallback,
    prepare_extract,
    prepare_insert,
)
from parcomb.verification import (
    MultisetOracle,
    PhaseSim,
    SimConfig,
    check_phase,
    check_quiescence,
    replay,
    run_phase,
    simulate_schedules,
)

E = (EXTRACT_MIN, None)


def I(x):
    return (INSERT, x)


def _run_sim(h, ops, seed=0):
    pre = MultisetOracle(h.values())
    sim = PhaseSim(h, ops)
    rng = random.Random(seed)
    while not sim.finished:
        sim.step(rng.choice(sim.enabled()))
    v = sim.verify(pre)
    assert v, v.message
    return sim


def test_extract_paired_with_insert():
    h = HeapState([1, 2, 3])
    sim = _run_sim(h, [E, I(5)])
    assert sim.reqs[0].res == 1
    assert sorted(h.values()) == [2, 3, 5]
    assert h.heap_property_holds()


def test_paired_inserts_keep_size():
    h = HeapState(range(10))
    extracts = [Request(EXTRACT_MIN) for _ in range(2)]
    inserts = [Request(INSERT, x) for x in (50, 60, 70)]
    rest = prepare_extract(h, extracts, inserts)
    assert h.m == 10
    assert [r.input for r in rest] == [70]
    assert sorted(r.res for r in extracts) == [0, 1]


def test_extract_everything_returns_sorted_values():
    # m > batch is required for the parallel path, so leave one value behind
    xs = [5, 3, 8, 1, 9, 2]
    h = HeapState(xs)
    sim = _run_sim(h, [E] * 5)
    assert sorted(r.res for r in sim.reqs) == sorted(xs)[:5]
    assert h.values() == [9]


def test_tail_holes_are_not_refilled_from_selected_nodes():
    # selecting nodes 1 and 3 puts a hole at the end of the array
    h = HeapState.from_array([1, 3, 2])
    extracts = [Request(EXTRACT_MIN) for _ in range(2)]
    prepare_extract(h, extracts, [])
    assert h.m == 1
    assert h.val[1] == 3


@pytest.mark.parametrize("seed", range(20))
def test_extract_phase_random_heaps(seed):
    rng = random.Random(seed)
    h = HeapState(rng.randrange(100) for _ in range(rng.randrange(9, 40)))
    ops = [E if rng.random() < 0.7 else I(rng.randrange(100)) for _ in range(rng.randrange(1, 8))]
    _run_sim(h, ops, seed)


def test_sift_root_down_one_level():
    h = HeapState.from_array([9, 2, 3])
    r = Request(EXTRACT_MIN)
    r.start = 1
    h.locked[1] = True
    sd = SiftDown(h, r)
    while not sd.done:
        assert sd.step()
    assert h.values() == [2, 9, 3]
    assert r.status is FINISHED and not any(h.locked)


def test_sift_from_leaf_finishes_immediately():
    h = HeapState([1, 2, 3])
    r = Request(EXTRACT_MIN)
    r.start = 3
    h.locked[3] = True
    sd = SiftDown(h, r)
    assert sd.step() and sd.done
    assert not h.locked[3] and r.iterations == 0


def test_upper_sift_waits_on_locked_child():
    h = HeapState.from_array([9, 8, 1, 2, 3, 4, 5])
    upper, lower = Request(EXTRACT_MIN), Request(EXTRACT_MIN)
    upper.start, lower.start = 1, 2
    h.locked[1] = h.locked[2] = True
    a, b = SiftDown(h, upper), SiftDown(h, lower)
    assert not a.ready() and not a.step()
    assert b.step()  # 8 swaps with 2
    assert a.ready()
    while not (a.done and b.done):
        for mc in (a, b):
            if not mc.done:
                mc.step()
    assert check_quiescence(h)
    assert sorted(h.values()) == [1, 2, 3, 4, 5, 8, 9]


def _descend_all(h, reqs, lo, hi, order):
    moves = []
    machines = [InsertDescent(h, r, lo, hi, moves) for r in reqs]
    while not all(mc.done for mc in machines):
        progressed = False
        for i in order:
            mc = machines[i]
            if not mc.done and mc.step():
                progressed = True
        assert progressed
    return moves


def test_insert_large_value_goes_to_new_leaf():
    h = HeapState([1, 2, 3])
    r = Request(INSERT, 10)
    lo, hi = prepare_insert(h, [r])
    assert (lo, hi, r.start) == (4, 4, 1)
    _descend_all(h, [r], lo, hi, [0])
    assert h.values() == [1, 2, 3, 10]


def test_insert_small_value_displaces_root():
    h = HeapState([1, 2, 3])
    r = Request(INSERT, 0)
    lo, hi = prepare_insert(h, [r])
    _descend_all(h, [r], lo, hi, [0])
    assert h.val[1] == 0
    assert sorted(h.values()) == [0, 1, 2, 3]
    assert check_quiescence(h)


@pytest.mark.parametrize("order", [[0, 1, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1]])
def test_four_inserts_into_m8(order):
    h = HeapState(range(10, 18))
    reqs = [Request(INSERT, x) for x in (1, 15, 30, 12)]
    lo, hi = prepare_insert(h, reqs)
    assert [r.start for r in reqs] == [1, 5, 11, 3]
    _descend_all(h, reqs, lo, hi, order)
    assert all(r.status is FINISHED for r in reqs)
    assert check_quiescence(h)
    assert sorted(h.values()) == sorted([*range(10, 18), 1, 15, 30, 12])


def test_three_inserts_into_m4():
    h = HeapState([1, 2, 3, 4])
    sim = _run_sim(h, [I(9), I(7), I(8)])
    assert h.m == 7
    assert sorted(h.values()) == [1, 2, 3, 4, 7, 8, 9]
    assert sim.stage == 1


def test_inserts_crossing_a_level_use_two_subphases():
    # targets 7 and 8 sit on different levels
    h = HeapState([1, 2, 3, 4, 5, 6])
    sim = _run_sim(h, [I(0), I(10)])
    assert sim.stage == 2
    assert sorted(h.values()) == [0, 1, 2, 3, 4, 5, 6, 10]


def test_fallback_on_small_heap():
    h = HeapState()
    sim = PhaseSim(h, [I(3), I(1), I(2)])
    assert sim.fallback and sim.finished
    assert sorted(h.values()) == [1, 2, 3]


def test_fallback_extract_on_empty_gives_empty_marker():
    h = HeapState([4])
    reqs = [Request(EXTRACT_MIN), Request(EXTRACT_MIN), Request(INSERT, 2)]
    apply_fallback(h, reqs)
    assert [reqs[0].res, reqs[1].res] == [4, EMPTY]
    assert h.values() == [2]


def test_large_heap_mixed_batch_returns_smallest():
    rng = random.Random(5)
    xs = [rng.randrange(10**6) for _ in range(1000)]
    h = HeapState(xs)
    ops = [E, I(7), E, E, I(3), E, I(999999), E]
    sim = _run_sim(h, ops)
    assert not sim.fallback
    got = sorted(r.res for r in sim.reqs if r.method == EXTRACT_MIN)
    assert got == sorted(xs)[:5]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 50), max_size=40),
    st.lists(st.one_of(st.none(), st.integers(0, 50)), min_size=1, max_size=12),
    st.integers(0, 2**32),
)
def test_any_batch_preserves_multiset(xs, raw_ops, seed):
    h = HeapState(xs)
    ops = [E if x is None else I(x) for x in raw_ops]
    oracle = MultisetOracle(xs)
    rec = run_phase(h, ops, random.Random(seed))
    assert check_phase(rec, oracle)
    assert sorted(h.values()) == oracle.sorted()
    assert check_quiescence(h)


def test_simulate_two_extracts_heap_of_7():
    res = simulate_schedules(SimConfig([1, 3, 2, 7, 4, 6, 5], [E, E], as_array=True))
    assert res, res.message
    assert res.terminals >= 1


def test_simulate_single_extract_matches_sequential():
    from parcomb.heap import seq_extract_min

    xs = list(range(1, 16))
    res = simulate_schedules(SimConfig(xs, [E]))
    assert res and res.terminals == 1
    sim = replay(SimConfig(xs, [E]), [])
    while not sim.finished:
        sim.step(0)
    ref = HeapState(xs)
    assert sim.reqs[0].res == seq_extract_min(ref)
    assert sim.h.values() == ref.values()


def test_simulate_three_inserts_on_m8():
    res = simulate_schedules(SimConfig(list(range(10, 18)), [I(1), I(20), I(12)]))
    assert res, res.message


def test_simulate_reports_status_after_extract_prep():
    h = HeapState(range(20))
    sim = PhaseSim(h, [E, E])
    assert all(r.status is SIFT for r in sim.reqs)
