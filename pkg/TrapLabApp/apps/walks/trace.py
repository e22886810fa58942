# apps/walks/trace.py
# --------------------------------
# Trace of the walk on a deep-trap set A and its cycle decomposition.
#
# Cycle k starts at D_k with the walk on a trap x in A. It ends at
# D_{k+1} = U + H_A o theta_U, where U is the first exit from B(A, ell).
# Under separation the walk cannot meet another trap before U, so all
# trap time in the cycle is time at x.

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import BudgetError, EmptyTraceError, InputError
from apps.core.random_source import BufferedDraws, RandomLike
from apps.core.trajectory import Trajectory
from apps.environment.environment import Environment
from apps.graphs.graph import check_separation
from apps.walks.simulate import JumpChain

logger = logging.getLogger(__name__)

CSV_HEADER = ("cycle", "trap", "time_at_trap", "cycle_length", "excursion_time")


# ============================================================
# Trace extraction
# ============================================================
def trace_extract(traj: Trajectory, A: Iterable[int]) -> Tuple[Trajectory, float]:
    """Path of the last A-site visited; returns (trace, offset).

    Time before the first visit to A is dropped and returned as the offset;
    the trace is re-based to start at 0.
    """
    members = set(int(a) for a in A)
    offset: Optional[float] = None
    last = None
    pieces = []
    for start, end, state in traj.segments():
        if state in members:
            last = state
            if offset is None:
                offset = start
        if last is not None:
            pieces.append((start - offset, end - offset, last))
    if offset is None:
        raise EmptyTraceError("trajectory never visits the trace set")
    return Trajectory.from_segments(pieces), offset


# ============================================================
# Cycle decomposition
# ============================================================
@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    trap: int
    time_at_trap: float
    cycle_length: float
    excursion_time: float
    next_trap: int

    @property
    def self_jump(self) -> bool:
        """Re-entry into the trap just left (invisible in the value-level trace)."""
        return self.next_trap == self.trap


@dataclass(frozen=True)
class TraceStats:
    traps: Tuple[int, ...]
    records: Tuple[CycleRecord, ...]

    @property
    def n_cycles(self) -> int:
        return len(self.records)

    @property
    def trap_sequence(self) -> Tuple[int, ...]:
        """X_{D_0}, X_{D_1}, ..., X_{D_n}."""
        if not self.records:
            return ()
        return (self.records[0].trap,) + tuple(r.next_trap for r in self.records)

    @property
    def visit_counts(self) -> Dict[int, int]:
        """Landings X_{D_k}, k >= 1, per trap."""
        counts = {x: 0 for x in self.traps}
        for r in self.records:
            counts[r.next_trap] += 1
        return counts

    @property
    def self_jumps(self) -> int:
        return sum(r.self_jump for r in self.records)

    @property
    def total_time(self) -> float:
        return math.fsum(r.cycle_length for r in self.records)

    @property
    def mean_cycle_length(self) -> float:
        return self.total_time / self.n_cycles

    def landing_frequencies(self) -> np.ndarray:
        counts = self.visit_counts
        return np.asarray([counts[x] for x in self.traps], dtype=float) / self.n_cycles

    def holding_times(self, trap: int) -> np.ndarray:
        return np.asarray([r.time_at_trap for r in self.records if r.trap == trap])

    def first_landing(self, subset: Iterable[int]) -> Optional[int]:
        """First X_{D_k}, k >= 1, that lies in subset."""
        wanted = set(subset)
        for r in self.records:
            if r.next_trap in wanted:
                return r.next_trap
        return None

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in self.records:
                writer.writerow([r.cycle, r.trap, repr(r.time_at_trap), repr(r.cycle_length), repr(r.excursion_time)])


def excursion_decomposition(
    env: Environment,
    A: Sequence[int],
    ell: int,
    n_cycles: int,
    x0: int,
    rng: RandomLike,
    step_budget: Optional[int] = None,
) -> TraceStats:
    """Simulate n_cycles returns D_1, ..., D_n to A starting from x0 in A."""
    traps = tuple(int(a) for a in A)
    if x0 not in traps:
        raise InputError(f"start {x0} is not a trap in A")
    if n_cycles < 1:
        raise InputError(f"n_cycles must be positive, got {n_cycles}")
    graph = env.graph
    check_separation(graph, traps, ell)
    budget = step_budget or setting("TRAPLAB_STEP_BUDGET")

    in_ball = [False] * graph.n_vertices
    for y in graph.ball(traps, ell):
        in_ball[y] = True
    in_A = [False] * graph.n_vertices
    for a in traps:
        in_A[a] = True

    draws = BufferedDraws(rng)
    chain = JumpChain(graph, draws)
    depth = env.depth_of.tolist()
    records: List[CycleRecord] = []
    x, steps = x0, 0
    for k in range(n_cycles):
        trap = x
        at_trap: List[float] = []
        outside: List[float] = []
        # up to U: leave B(A, ell)
        while in_ball[x]:
            hold = draws.exponential(depth[x])
            (at_trap if x == trap else outside).append(hold)
            x = chain.step(x)
            steps += 1
            if steps > budget:
                raise BudgetError(f"cycle {k} did not leave B(A, {ell}) within {budget} jumps")
        # up to D_{k+1}: reach A again
        while not in_A[x]:
            outside.append(draws.exponential(depth[x]))
            x = chain.step(x)
            steps += 1
            if steps > budget:
                raise BudgetError(f"cycle {k} did not return to A within {budget} jumps")
        trap_time = math.fsum(at_trap)
        excursion = math.fsum(outside)
        records.append(CycleRecord(k, trap, trap_time, trap_time + excursion, excursion, x))

    stats = TraceStats(traps, tuple(records))
    logger.debug(
        f"[excursion_decomposition] {n_cycles} cycles, mean length {stats.mean_cycle_length:.6g}, "
        f"{stats.self_jumps} self-jumps"
    )
    return stats


# ============================================================
# Y-process
# ============================================================
def y_process_params(env: Environment, A: Sequence[int], escape: Mapping[int, float]) -> Tuple[np.ndarray, np.ndarray]:
    """(Z, u) of the chain on A that holds Exponential(W_x / v(x)) and jumps by rho.

    Labels follow the order of A; feed the pair to kprocess.finite_chain.
    """
    v = np.asarray([escape[x] for x in A], dtype=float)
    if np.any(v <= 0):
        raise InputError("escape probabilities must be positive")
    W = env.depth_of[list(A)]
    deg = env.graph.degrees[list(A)]
    return W / v, deg * v
