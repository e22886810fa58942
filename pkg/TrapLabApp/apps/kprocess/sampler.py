# apps/kprocess/sampler.py
# --------------------------------
# K-process and finite-state chain samplers.
#
# Internal time runs a superposition of the K clocks (total rate sum u);
# each ring picks clock k with probability u_k / sum u, and the process then
# sits at k for Z_k times an Exponential(1) mark. Between rings it is at
# infinity, which carries no real time unless tail_mode="mean" charges the
# untracked clocks' expected contribution tail_bound per unit internal time.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from apps.core.exceptions import InputError
from apps.core.random_source import BufferedDraws, RandomLike
from apps.core.trajectory import Trajectory
from apps.exact.distribution import Distribution
from apps.kprocess.params import INFINITY, KParams

logger = logging.getLogger(__name__)

TAIL_MODES = ("drop", "mean")


class _RingPicker:
    """Clock identity of a ring: inverse CDF over u / sum u."""

    def __init__(self, u: np.ndarray, draws: BufferedDraws):
        self.total = math.fsum(u.tolist())
        self.cdf = np.cumsum(u / self.total).tolist()
        self.draws = draws
        self._last = len(self.cdf) - 1

    def pick(self) -> int:
        """1-based clock label."""
        target = self.draws.uniform()
        lo, hi = 0, self._last
        while lo < hi:
            mid = (lo + hi) // 2
            if self.cdf[mid] < target:
                lo = mid + 1
            else:
                hi = mid
        return lo + 1


class _SegmentLog:
    def __init__(self, horizon: float):
        self.horizon = horizon
        self.t = 0.0
        self.pieces: List[Tuple[float, float, int]] = []

    @property
    def full(self) -> bool:
        return self.t >= self.horizon

    def add(self, state: int, length: float) -> None:
        end = min(self.t + length, self.horizon)
        if end > self.t:
            self.pieces.append((self.t, end, state))
            self.t = end

    @property
    def first_hold(self) -> float:
        return self.pieces[0][1] - self.pieces[0][0] if self.pieces else 0.0

    def build(self) -> Trajectory:
        return Trajectory.from_segments(self.pieces)


@dataclass(frozen=True)
class KTrajectory:
    """K-process path with the bookkeeping of the truncation."""

    trajectory: Trajectory
    internal_time: float
    misattribution_bound: float
    tail_mode: str
    # Length of the first exponential hold, before equal neighbours merge
    first_hold: float = 0.0


def sample_kprocess(
    p: KParams, y: int, horizon: float, rng: RandomLike, tail_mode: str = "drop"
) -> KTrajectory:
    """K-process path from y (1..K, or INFINITY) on [0, horizon].

    Starting at INFINITY is approximated by starting at the first ring.
    """
    if not horizon > 0:
        raise InputError(f"horizon must be positive, got {horizon}")
    if tail_mode not in TAIL_MODES:
        raise InputError(f"tail_mode must be one of {TAIL_MODES}, got {tail_mode!r}")
    if y != INFINITY and not 1 <= y <= p.k_max:
        raise InputError(f"start state {y} not in 1..{p.k_max} or INFINITY")

    draws = BufferedDraws(rng)
    picker = _RingPicker(p.u, draws)
    Z = p.Z.tolist()
    log = _SegmentLog(horizon)
    internal = 0.0
    if y != INFINITY:
        log.add(y, draws.exponential(Z[y - 1]))
    while not log.full:
        gap = draws.exponential(1.0 / picker.total)
        internal += gap
        if tail_mode == "mean":
            log.add(INFINITY, p.tail_bound * gap)
        k = picker.pick()
        log.add(k, draws.exponential(Z[k - 1]))
    return KTrajectory(log.build(), internal, p.tail_bound * internal, tail_mode, log.first_hold)


def finite_chain(Z: Sequence[float], u: Sequence[float], y: int, horizon: float, rng: RandomLike) -> Trajectory:
    """Chain on 1..M: hold Exponential(Z_k), then jump to j w.p. u_j / sum u.

    Self-jumps happen and merge into one segment at the value level.
    """
    Z = np.asarray(Z, dtype=float)
    u = np.asarray(u, dtype=float)
    if Z.ndim != 1 or Z.shape != u.shape or Z.size == 0:
        raise InputError("Z and u must be nonempty and equally long")
    if np.any(Z <= 0) or np.any(u <= 0):
        raise InputError("Z and u must be positive")
    if not 1 <= y <= Z.size:
        raise InputError(f"start state {y} not in 1..{Z.size}")
    if not horizon > 0:
        raise InputError(f"horizon must be positive, got {horizon}")

    draws = BufferedDraws(rng)
    picker = _RingPicker(u, draws)
    means = Z.tolist()
    log = _SegmentLog(horizon)
    state = y
    while True:
        log.add(state, draws.exponential(means[state - 1]))
        if log.full:
            break
        state = picker.pick()
    return log.build()


def hitting_law(
    p: KParams, A: Sequence[int], n_samples: int, rng: RandomLike, y: int = INFINITY
) -> Distribution:
    """Empirical law of X(H_A) from y outside A.

    Only rings move the process into a finite state, so X(H_A) is the first
    ring whose clock lies in A.
    """
    members = sorted(set(int(a) for a in A))
    if not members or members[0] < 1 or members[-1] > p.k_max:
        raise InputError(f"A must be a nonempty subset of 1..{p.k_max}")
    if y in members:
        raise InputError(f"start {y} lies in A")
    if n_samples < 1:
        raise InputError(f"need at least one sample, got {n_samples}")
    picker = _RingPicker(p.u, BufferedDraws(rng))
    wanted = set(members)
    counts = {a: 0 for a in members}
    for _ in range(n_samples):
        k = picker.pick()
        while k not in wanted:
            k = picker.pick()
        counts[k] += 1
    return Distribution.from_weights(members, [counts[a] for a in members])


def hitting_law_exact(p: KParams, A: Sequence[int]) -> Distribution:
    """u_j / sum_{i in A} u_i."""
    members = sorted(set(int(a) for a in A))
    return Distribution.from_weights(members, [p.u[a - 1] for a in members])


def trace_on(traj: Trajectory, subset: Sequence[int]) -> Trajectory:
    """Path observed only while in `subset`, time outside it removed."""
    wanted = set(subset)
    pieces, t = [], 0.0
    for start, end, state in traj.segments():
        if state in wanted:
            pieces.append((t, t + (end - start), state))
            t += end - start
    if not pieces:
        raise InputError("path never visits the subset")
    return Trajectory.from_segments(pieces)
