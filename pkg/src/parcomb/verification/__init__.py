"""Oracles, quiescence and bound checks, and the schedule simulator."""
from .graph import UnionFind, check_read_log, components_oracle
from .oracle import (
    MultisetOracle,
    Verdict,
    check_bounds,
    check_final,
    check_phase,
    check_phases,
    check_quiescence,
    check_read_phase,
    dump_log,
    load_log,
    split_move_bound,
    step_bound,
)
from .simulate import PhaseSim, SimConfig, SimResult, replay, run_phase, simulate_schedules

__all__ = [
    "MultisetOracle",
    "PhaseSim",
    "SimConfig",
    "SimResult",
    "UnionFind",
    "Verdict",
    "check_bounds",
    "check_final",
    "check_phase",
    "check_phases",
    "check_quiescence",
    "check_read_log",
    "check_read_phase",
    "components_oracle",
    "dump_log",
    "load_log",
    "replay",
    "run_phase",
    "simulate_schedules",
    "split_move_bound",
    "step_bound",
]
