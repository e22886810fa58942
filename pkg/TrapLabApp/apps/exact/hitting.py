# apps/exact/hitting.py
# --------------------------------
# Exact hitting quantities for the jump chain: stationary measures, harmonic
# measures, equilibrium hitting distribution, escape probabilities,
# capacities and the trace stationary state rho.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from apps.core.exceptions import DomainError, InputError
from apps.environment.environment import Environment
from apps.exact.distribution import Distribution
from apps.exact.solvers import GraphLike, graph_of, solve_dirichlet
from apps.graphs.graph import Graph, check_separation
from apps.graphs.trees import RootedTree

logger = logging.getLogger(__name__)

RHO_FORMS_TOL = 1e-12


def vertex_tuple(g: Graph, A: Iterable[int]) -> Tuple[int, ...]:
    members = tuple(int(a) for a in A)
    if not members:
        raise InputError("set A is empty")
    if len(set(members)) != len(members):
        raise InputError("set A lists a vertex twice")
    for a in members:
        if not 0 <= a < g.n_vertices:
            raise InputError(f"vertex {a} not in graph")
    return members


# ============================================================
# Stationary measures
# ============================================================
def stationary_nu(env: Environment) -> Distribution:
    """nu(x) = deg(x) W_x / sum_y deg(y) W_y."""
    return Distribution.from_weights(range(env.n_vertices), env.weights)


def stationary_pi(g: GraphLike) -> Distribution:
    """pi(x) proportional to deg(x)."""
    g = graph_of(g)
    return Distribution.from_weights(range(g.n_vertices), g.degrees.astype(float))


# ============================================================
# Harmonic measure
# ============================================================
def harmonic_measure(g: GraphLike, A: Sequence[int]) -> Tuple[Tuple[int, ...], np.ndarray]:
    """(order, H) with H[z, j] = P_z[X_{H_A} = order[j]]; order = sorted(A)."""
    g = graph_of(g)
    order = tuple(sorted(vertex_tuple(g, A)))
    H = solve_dirichlet(g, order, np.eye(len(order)))
    return order, H


def hit_distribution_exact(env: GraphLike, z: int, A: Sequence[int]) -> Distribution:
    """Law of X_{H_A} from z (H_A >= 0, so z in A gives a point mass)."""
    g = graph_of(env)
    members = vertex_tuple(g, A)
    if z in members:
        return Distribution.point_mass(z)
    order, H = harmonic_measure(g, members)
    return Distribution.from_weights(order, H[z])


def return_hit_distribution(env: GraphLike, x: int, A: Sequence[int]) -> Distribution:
    """Law of X_{H^+_A} from x: one forced step, then hit A."""
    g = graph_of(env)
    order, H = harmonic_measure(g, A)
    rows = H[list(g.neighbors(x))]
    return Distribution.from_weights(order, rows.mean(axis=0))


def equilibrium_hit(env: GraphLike, A: Sequence[int]) -> Distribution:
    """p(x, A) = P_pi[X_{H_A} = x]."""
    g = graph_of(env)
    order, H = harmonic_measure(g, A)
    pi = stationary_pi(g).mass
    return Distribution.from_weights(order, pi @ H)


# ============================================================
# Escape probabilities
# ============================================================
def escape_probability_exact(env: GraphLike, x: int, ell: int) -> float:
    """v_ell(x) = P_x[H_{R(x, ell)} < H^+_x] by first-step decomposition."""
    g = graph_of(env)
    if ell < 0:
        raise InputError(f"radius must be nonnegative, got {ell}")
    outside = g.exterior(x, ell)
    if not outside:
        raise DomainError(f"ball({x}, {ell}) covers the whole graph; escape is undefined")
    boundary = sorted(outside | {x})
    values = np.asarray([0.0 if b == x else 1.0 for b in boundary])
    h = solve_dirichlet(g, boundary, values)
    return math.fsum(h[list(g.neighbors(x))].tolist()) / g.degree(x)


def escape_probabilities(env: GraphLike, A: Sequence[int], ell: int) -> Dict[int, float]:
    return {int(x): escape_probability_exact(env, x, ell) for x in A}


def tree_escape_probability(tree: RootedTree, depth: int) -> float:
    """P_root[reach generation `depth` before returning to the root].

    Effective conductance by series/parallel reduction from the leaves up:
    a child subtree of conductance C contributes C / (1 + C) through its unit
    edge, and a vertex at generation `depth` has infinite conductance.

    Reaching generation `depth` is reaching R(root, depth - 1), so this equals
    escape_probability_exact(tree.as_graph(), 0, depth - 1) and
    regular_tree_escape(d, depth - 1) on a regular tree.
    """
    if depth < 1:
        raise InputError(f"depth must be at least 1, got {depth}")
    levels = np.asarray(tree.depth_of)
    if not np.any(levels == depth):
        raise DomainError(f"tree has no vertex at generation {depth}; escape is undefined")
    parent = np.asarray([-1] + list(tree.parent[1:]), dtype=np.int64)
    conductance = np.zeros(tree.n_vertices)
    for level in range(depth, 0, -1):
        members = np.flatnonzero(levels == level)
        c = conductance[members]
        through = np.ones_like(c) if level == depth else c / (1.0 + c)
        np.add.at(conductance, parent[members], through)
    return float(conductance[0]) / len(tree.children[0])


# ============================================================
# Capacity
# ============================================================
@dataclass(frozen=True)
class CapacityPair:
    dirichlet: float
    boundary: float

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.dirichlet), abs(self.boundary))
        return abs(self.dirichlet - self.boundary) / scale if scale else 0.0


def dirichlet_form(env: Environment, f: np.ndarray) -> float:
    """D(f) = 1/2 sum_x sum_{y~x} nu(x)/(deg(x) W_x) (f(x) - f(y))^2.

    The edge coefficient nu(x)/(deg(x) W_x) is 1/Z for every x, so D(f) is
    the sum of squared edge increments over Z.
    """
    f = np.asarray(f, dtype=float)
    u, v = np.asarray(list(env.graph.edges())).T
    return math.fsum(((f[u] - f[v]) ** 2).tolist()) / env.normalizer


def equilibrium_potential(g: GraphLike, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """g_{A,B}(x) = P_x[H_A < H_B] (1 on A, 0 on B)."""
    g = graph_of(g)
    a, b = set(A), set(B)
    boundary = sorted(a | b)
    return solve_dirichlet(g, boundary, np.asarray([1.0 if v in a else 0.0 for v in boundary]))


def capacity(env: Environment, A: Sequence[int], B: Sequence[int]) -> CapacityPair:
    """Cap(A, B) twice: Dirichlet form of g_{A,B} and the boundary flux sum."""
    g = env.graph
    A = vertex_tuple(g, A)
    B = vertex_tuple(g, B)
    if set(A) & set(B):
        raise InputError("capacity needs disjoint sets A and B")
    potential = equilibrium_potential(g, A, B)
    by_form = dirichlet_form(env, potential)

    # nu(y) W_y^{-1} P_y[H_B < H^+_A] = (1/Z) sum_{z~y} (1 - g(z))
    flux = [1.0 - potential[z] for y in A for z in g.neighbors(y)]
    by_boundary = math.fsum(flux) / env.normalizer
    return CapacityPair(by_form, by_boundary)


# ============================================================
# Trace stationary state
# ============================================================
def rho_forms(env: Environment, A: Sequence[int], ell: int) -> Tuple[np.ndarray, np.ndarray]:
    """rho over A (in A's order) from deg(x) v(x) and from nu(x) v(x) / W_x."""
    g = env.graph
    A = vertex_tuple(g, A)
    check_separation(g, A, ell)
    v = np.asarray([escape_probability_exact(g, x, ell) for x in A])
    idx = list(A)
    by_degree = g.degrees[idx] * v
    nu = stationary_nu(env).mass
    by_nu = nu[idx] * v / env.depth_of[idx]
    return by_degree / math.fsum(by_degree.tolist()), by_nu / math.fsum(by_nu.tolist())


def rho_exact(env: Environment, A: Sequence[int], ell: int) -> Distribution:
    by_degree, by_nu = rho_forms(env, A, ell)
    gap = float(np.max(np.abs(by_degree - by_nu)))
    if gap > RHO_FORMS_TOL:
        logger.warning(f"[rho_exact] degree and nu forms of rho differ by {gap:.3g}")
    return Distribution.from_weights(tuple(int(a) for a in A), by_degree)


def gamma_ell(env: GraphLike, A: Sequence[int], ell: int) -> float:
    """Gamma_ell(A) = sum_{x in A} deg(x) v_ell(x)."""
    g = graph_of(env)
    return math.fsum(g.degree(x) * escape_probability_exact(g, x, ell) for x in A)
