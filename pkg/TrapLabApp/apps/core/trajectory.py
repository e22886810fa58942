# apps/core/trajectory.py
# --------------------------------
# Right-continuous piecewise-constant paths on [0, T].
# Segment i covers [t_i, t_{i+1}) with t_0 = 0 and t_{k+1} = T; only the
# interior jump times are stored. The same class carries integer walk states,
# K-process states and real-valued step functions for the metric module.

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import InputError

Segment = Tuple[float, float, Union[int, float]]


@dataclass(frozen=True, eq=False)
class Trajectory:
    horizon: float
    jump_times: np.ndarray
    states: np.ndarray
    # Values at jump points (average of one-sided limits), set by metric.canonical
    jump_values: Optional[Tuple[float, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        times = np.asarray(self.jump_times, dtype=float)
        states = np.asarray(self.states)
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "states", states)
        if not self.horizon > 0:
            raise InputError(f"horizon must be positive, got {self.horizon}")
        if states.ndim != 1 or times.ndim != 1 or states.size != times.size + 1:
            raise InputError(
                f"need one more state than jump times, got {states.size} states and {times.size} jumps"
            )
        if times.size:
            if times[0] <= 0 or times[-1] >= self.horizon:
                raise InputError("jump times must lie in (0, T)")
            if np.any(np.diff(times) <= 0):
                raise InputError("jump times must be strictly increasing")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.horizon == other.horizon
            and np.array_equal(self.jump_times, other.jump_times)
            and np.array_equal(self.states, other.states)
        )

    __hash__ = None  # type: ignore[assignment]

    # ------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------
    @classmethod
    def constant(cls, value, horizon: float) -> "Trajectory":
        return cls(horizon, np.empty(0), np.asarray([value]))

    @classmethod
    def from_segments(cls, segments: Iterable[Segment], tol: float = 0.0) -> "Trajectory":
        """Build from (start, end, state) triples laid end to end.

        Segments no longer than `tol` are dropped and equal neighbours merged.
        """
        starts: List[float] = []
        values: List = []
        horizon = None
        for start, end, state in segments:
            horizon = end
            if end - start <= tol:
                continue
            if values and values[-1] == state:
                continue
            starts.append(start)
            values.append(state)
        if horizon is None or not values:
            raise InputError("trajectory needs at least one segment of positive length")
        return cls(float(horizon), np.asarray(starts[1:], dtype=float), np.asarray(values))

    # ------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------
    @property
    def n_segments(self) -> int:
        return int(self.states.size)

    @property
    def breakpoints(self) -> np.ndarray:
        """0, jump times, T."""
        return np.concatenate(([0.0], self.jump_times, [self.horizon]))

    def durations(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def segments(self) -> Iterator[Segment]:
        bp = self.breakpoints
        for i, state in enumerate(self.states.tolist()):
            yield float(bp[i]), float(bp[i + 1]), state

    def value_at(self, t: float):
        if not 0 <= t <= self.horizon:
            raise InputError(f"t={t} outside [0, {self.horizon}]")
        return self.states[int(np.searchsorted(self.jump_times, t, side="right"))].item()

    def occupation(self) -> Dict:
        """Total time spent in each state (compensated sums)."""
        buckets: Dict = {}
        for start, end, state in self.segments():
            buckets.setdefault(state, []).append(end - start)
        return {state: math.fsum(parts) for state, parts in buckets.items()}

    def map_states(self, fn: Callable) -> "Trajectory":
        """Apply fn to each state, keeping the segment layout."""
        return Trajectory(self.horizon, self.jump_times, np.asarray([fn(s) for s in self.states.tolist()]))

    def truncated(self, horizon: float) -> "Trajectory":
        """Restriction to [0, horizon]."""
        if not 0 < horizon <= self.horizon:
            raise InputError(f"horizon {horizon} outside (0, {self.horizon}]")
        return Trajectory.from_segments((s, min(e, horizon), v) for s, e, v in self.segments() if s < horizon)

    def scaled(self, factor: float) -> "Trajectory":
        """Time rescaled by `factor` (t -> t * factor)."""
        return Trajectory(self.horizon * factor, self.jump_times * factor, self.states)

    # ------------------------------------------------------------
    # JSONL
    # ------------------------------------------------------------
    def to_jsonl(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for start, end, state in self.segments():
                fh.write(json.dumps({"t_start": start, "t_end": end, "state": state}) + "\n")

    @classmethod
    def from_jsonl(cls, path: Union[str, Path]) -> "Trajectory":
        records = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    records.append(json.loads(line))
        if not records:
            raise InputError(f"{path} holds no segments")
        for prev, cur in zip(records, records[1:]):
            if cur["t_start"] != prev["t_end"]:
                raise InputError(f"{path}: segments are not contiguous at t={cur['t_start']}")
        return cls(
            float(records[-1]["t_end"]),
            np.asarray([r["t_start"] for r in records[1:]], dtype=float),
            np.asarray([r["state"] for r in records]),
        )


def step_function(breaks: Sequence[float], values: Sequence[float]) -> Trajectory:
    """Step function from breakpoints [0, t_1, ..., T] and one value per interval."""
    if len(breaks) != len(values) + 1 or breaks[0] != 0:
        raise InputError("breaks must be [0, ..., T] with one more entry than values")
    return Trajectory(float(breaks[-1]), np.asarray(breaks[1:-1], dtype=float), np.asarray(values, dtype=float))
