# apps/walks/simulate.py
# --------------------------------
# Trap walk simulation.
# Continuous time: hold Exponential(mean W_x) at x, then jump to a uniform
# neighbour. Every step consumes exactly two uniforms (hold, then target) from
# the same BufferedDraws, so simulate() and the excursion decomposition see
# identical paths for identical streams.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import BudgetError, DomainError, InputError
from apps.core.random_source import BufferedDraws, RandomLike
from apps.core.trajectory import Trajectory
from apps.environment.environment import Environment
from apps.graphs.graph import Graph

logger = logging.getLogger(__name__)


class JumpChain:
    """Uniform-neighbour steps on a graph, driven by buffered uniforms."""

    def __init__(self, graph: Graph, draws: BufferedDraws):
        indptr, indices = graph.csr
        self._indptr = indptr.tolist()
        self._indices = indices.tolist()
        self._deg = graph.degrees.tolist()
        self.draws = draws

    def step(self, x: int) -> int:
        return self._indices[self._indptr[x] + self.draws.index(self._deg[x])]

    def lazy_step(self, x: int) -> int:
        if self.draws.uniform() <= 0.5:
            return x
        return self.step(x)


class _PathBuilder:
    """Collects (time, state) jumps; a zero-length hold overwrites instead of appending."""

    def __init__(self, x0: int):
        self.times: List[float] = []
        self.states: List[int] = [x0]

    def jump(self, t: float, x: int) -> None:
        last = self.times[-1] if self.times else 0.0
        if t > last:
            self.times.append(t)
            self.states.append(x)
            return
        self.states[-1] = x
        if len(self.states) > 1 and self.states[-2] == x:
            self.states.pop()
            self.times.pop()

    def build(self, horizon: float) -> Trajectory:
        return Trajectory(horizon, np.asarray(self.times), np.asarray(self.states, dtype=np.int64))


def _check_vertex(graph: Graph, x: int) -> None:
    if not 0 <= x < graph.n_vertices:
        raise InputError(f"vertex {x} not in 0..{graph.n_vertices - 1}")


# ============================================================
# Continuous-time walk
# ============================================================
def simulate(env: Environment, x0: int, horizon: float, rng: RandomLike) -> Trajectory:
    """Trap walk from x0 on [0, horizon]."""
    if not horizon > 0:
        raise InputError(f"horizon must be positive, got {horizon}")
    _check_vertex(env.graph, x0)
    draws = BufferedDraws(rng)
    chain = JumpChain(env.graph, draws)
    depth = env.depth_of.tolist()
    path = _PathBuilder(x0)
    t, x = 0.0, x0
    while True:
        hold = draws.exponential(depth[x])
        if t + hold >= horizon:
            break
        t += hold
        x = chain.step(x)
        path.jump(t, x)
    return path.build(horizon)


def simulate_lazy(g: Graph, x0: int, n_steps: int, rng: RandomLike) -> np.ndarray:
    """Lazy embedded chain: stay w.p. 1/2, else move to a uniform neighbour."""
    if n_steps < 0:
        raise InputError(f"n_steps must be nonnegative, got {n_steps}")
    _check_vertex(g, x0)
    chain = JumpChain(g, BufferedDraws(rng))
    out = np.empty(n_steps + 1, dtype=np.int64)
    x = out[0] = x0
    for i in range(1, n_steps + 1):
        x = chain.lazy_step(x)
        out[i] = x
    return out


# ============================================================
# Escape and hitting
# ============================================================
@dataclass(frozen=True)
class EscapeEstimate:
    value: float
    stderr: float
    n_samples: int


def escape_probability_mc(
    env: Environment,
    x: int,
    ell: int,
    n: int,
    rng: RandomLike,
    step_budget: Optional[int] = None,
) -> EscapeEstimate:
    """Frequency of reaching distance > ell from x before returning to x."""
    graph = env.graph if isinstance(env, Environment) else env
    _check_vertex(graph, x)
    if n < 1:
        raise InputError(f"need at least one sample, got {n}")
    inside = graph.ball(x, ell)
    if len(inside) == graph.n_vertices:
        raise DomainError(f"ball({x}, {ell}) covers the whole graph; escape is undefined")
    budget = step_budget or setting("TRAPLAB_STEP_BUDGET")
    in_ball = [False] * graph.n_vertices
    for y in inside:
        in_ball[y] = True

    chain = JumpChain(graph, BufferedDraws(rng))
    successes, steps = 0, 0
    for _ in range(n):
        y = chain.step(x)
        steps += 1
        while in_ball[y] and y != x:
            y = chain.step(y)
            steps += 1
            if steps > budget:
                raise BudgetError(f"escape estimate exceeded {budget} jumps")
        successes += not in_ball[y]
    p = successes / n
    return EscapeEstimate(p, math.sqrt(p * (1.0 - p) / n), n)


def _target_mask(graph: Graph, B: Iterable[int]) -> List[bool]:
    mask = [False] * graph.n_vertices
    count = 0
    for b in B:
        _check_vertex(graph, b)
        mask[b] = True
        count += 1
    if not count:
        raise InputError("target set B is empty")
    return mask


def hitting_sample(
    env: Environment,
    x0: int,
    B: Iterable[int],
    rng: RandomLike,
    step_budget: Optional[int] = None,
) -> Tuple[int, float]:
    """(X_{H_B}, H_B) for the continuous-time walk from x0."""
    target = _target_mask(env.graph, B)
    _check_vertex(env.graph, x0)
    budget = step_budget or setting("TRAPLAB_STEP_BUDGET")
    draws = BufferedDraws(rng)
    chain = JumpChain(env.graph, draws)
    depth = env.depth_of.tolist()
    x, holds, steps = x0, [], 0
    while not target[x]:
        holds.append(draws.exponential(depth[x]))
        x = chain.step(x)
        steps += 1
        if steps > budget:
            raise BudgetError(f"B not reached within {budget} jumps from {x0}")
    return x, math.fsum(holds)


def hitting_vertex(
    g: Graph,
    x0: int,
    B: Iterable[int],
    rng: RandomLike,
    lazy: bool = False,
    step_budget: Optional[int] = None,
) -> Tuple[int, int]:
    """(X_{H_B}, number of steps) for the jump chain or its lazy version."""
    target = _target_mask(g, B)
    _check_vertex(g, x0)
    budget = step_budget or setting("TRAPLAB_STEP_BUDGET")
    chain = JumpChain(g, BufferedDraws(rng))
    advance = chain.lazy_step if lazy else chain.step
    x, steps = x0, 0
    while not target[x]:
        x = advance(x)
        steps += 1
        if steps > budget:
            raise BudgetError(f"B not reached within {budget} steps from {x0}")
    return x, steps
