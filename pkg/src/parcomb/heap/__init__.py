"""Parallel batched binary-heap priority queue."""
from .batched import (
    EXTRACT_MIN,
    INSERT,
    ParallelHeap,
    PhaseRecord,
    PriorityQueue,
    SequentialHeap,
    apply_fallback,
    prepare_extract,
    prepare_insert,
)
from .insertset import InsertSet
from .state import EMPTY, EmptyQueue, HeapState, seq_extract_min, seq_insert, select_k_smallest
from .steps import InsertDescent, SiftDown
from .targets import compute_insert_starts, level_chunks, targets_in_subtree

__all__ = [
    "EMPTY",
    "EXTRACT_MIN",
    "INSERT",
    "EmptyQueue",
    "HeapState",
    "InsertDescent",
    "InsertSet",
    "ParallelHeap",
    "PhaseRecord",
    "PriorityQueue",
    "SequentialHeap",
    "SiftDown",
    "apply_fallback",
    "compute_insert_starts",
    "level_chunks",
    "prepare_extract",
    "prepare_insert",
    "select_k_smallest",
    "seq_extract_min",
    "seq_insert",
    "targets_in_subtree",
]
