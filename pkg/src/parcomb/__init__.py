"""Parallel combining: concurrent data structures from parallel batched ones."""
from .combining import CombiningStructure, Request, RequestStatus, SequentialCombining
from .heap import EMPTY, PriorityQueue
from .read_optimized import GraphDemo, ReadOptimized

__all__ = [
    "EMPTY",
    "CombiningStructure",
    "GraphDemo",
    "PriorityQueue",
    "ReadOptimized",
    "Request",
    "RequestStatus",
    "SequentialCombining",
]
__version__ = "0.1.0"
