# apps/exact/occupation.py
# --------------------------------
# Expected occupation over one trace cycle [0, D_1] and the identities
# that tie it to nu and rho.

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import DomainError, InputError
from apps.environment.environment import Environment
from apps.exact.hitting import vertex_tuple, escape_probability_exact, rho_exact, stationary_nu
from apps.exact.solvers import solve_dirichlet, solve_killed
from apps.graphs.graph import check_separation

VertexFunction = Union[Sequence[float], np.ndarray, Mapping[int, float], Callable[[int], float]]


def as_vertex_array(env: Environment, g: VertexFunction) -> np.ndarray:
    n = env.n_vertices
    if callable(g):
        return np.asarray([g(x) for x in range(n)], dtype=float)
    if isinstance(g, Mapping):
        return np.asarray([g.get(x, 0.0) for x in range(n)], dtype=float)
    arr = np.asarray(g, dtype=float)
    if arr.shape != (n,):
        raise InputError(f"vertex function needs {n} values, got {arr.size}")
    return arr


def _cycle_occupation_vector(env: Environment, A: Tuple[int, ...], ell: int, g: np.ndarray) -> np.ndarray:
    """E_x[int_0^{D_1} g(X_t) dt] for every x in B(A, ell)."""
    graph = env.graph
    exterior = graph.exterior(A, ell)
    if not exterior:
        raise DomainError(f"B(A, {ell}) covers the graph; no cycle can leave it")
    source = env.weights * g
    # after U: occupation until H_A, for every start
    after_exit = solve_killed(graph, A, source)
    # before U: occupation inside B(A, ell), then continue from X_U
    before_exit = solve_killed(graph, exterior, source)
    boundary = sorted(exterior)
    carried = solve_dirichlet(graph, boundary, after_exit[boundary])
    return before_exit + carried


def expected_occupation(env: Environment, x: int, A: Sequence[int], ell: int, g: VertexFunction) -> float:
    """E_x[int_0^{D_1} g(X_t) dt] for x in A."""
    A = vertex_tuple(env.graph, A)
    if x not in A:
        raise InputError(f"start {x} is not in A")
    check_separation(env.graph, A, ell)
    return float(_cycle_occupation_vector(env, A, ell, as_vertex_array(env, g))[x])


def occupation_identity(env: Environment, A: Sequence[int], ell: int, g: VertexFunction) -> Tuple[float, float]:
    """(sum_{x in A} v(x) nu(x) W_x^{-1} E_x[int_0^{D_1} g], sum_x g(x) nu(x))."""
    A = vertex_tuple(env.graph, A)
    check_separation(env.graph, A, ell)
    values = as_vertex_array(env, g)
    occupation = _cycle_occupation_vector(env, A, ell, values)
    nu = stationary_nu(env).mass
    lhs = math.fsum(
        escape_probability_exact(env.graph, x, ell) * nu[x] / env.depth_of[x] * occupation[x] for x in A
    )
    rhs = math.fsum((values * nu).tolist())
    return lhs, rhs


def mean_cycle_length_exact(env: Environment, A: Sequence[int], ell: int) -> float:
    """E_rho[D_1] = E_rho[W_x / v(x)] / (1 - nu(V \\ A))."""
    rho = rho_exact(env, A, ell)
    mean_hold = math.fsum(
        p * env.depth_of[x] / escape_probability_exact(env.graph, x, ell) for x, p in rho.as_dict().items()
    )
    return mean_hold / (1.0 - env.shallow_mass(A))


def mean_cycle_occupation(env: Environment, A: Sequence[int], ell: int, g: VertexFunction) -> float:
    """E_rho[int_0^{D_1} g], which equals E_nu[g] * E_rho[D_1]."""
    A = vertex_tuple(env.graph, A)
    rho = rho_exact(env, A, ell)
    occupation = _cycle_occupation_vector(env, A, ell, as_vertex_array(env, g))
    return math.fsum(p * occupation[x] for x, p in rho.as_dict().items())
