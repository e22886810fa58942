# apps/exact/solvers.py
# --------------------------------
# Dirichlet problems for the jump chain, written in the symmetric form
# L = D - Adj (graph Laplacian). Harmonic functions and killed Green
# functions both reduce to SPD systems L_II x = b on the interior.
# Dense Cholesky-type solve up to TRAPLAB_DENSE_LIMIT interior vertices,
# Jacobi-preconditioned conjugate gradient above it.

from __future__ import annotations

import logging
from typing import Iterable, Union

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse import linalg as splinalg

from apps.core.conf import setting
from apps.core.exceptions import InputError, TrapLabError
from apps.environment.environment import Environment
from apps.graphs.graph import Graph

logger = logging.getLogger(__name__)

GraphLike = Union[Graph, Environment]


def graph_of(obj: GraphLike) -> Graph:
    return obj.graph if isinstance(obj, Environment) else obj


def laplacian(g: Graph) -> sparse.csr_matrix:
    return (sparse.diags(g.degrees.astype(float)) - g.adjacency_matrix).tocsr()


def _split(g: Graph, boundary: Iterable[int]):
    mask = np.zeros(g.n_vertices, dtype=bool)
    idx = np.asarray(sorted(set(int(b) for b in boundary)), dtype=np.int64)
    if idx.size == 0:
        raise InputError("boundary set is empty")
    mask[idx] = True
    return idx, np.flatnonzero(~mask)


def spd_solve(M: sparse.spmatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve an SPD system, dense for small sizes and CG otherwise."""
    n = M.shape[0]
    if n <= setting("TRAPLAB_DENSE_LIMIT"):
        return scipy.linalg.solve(M.toarray(), rhs, assume_a="pos")

    tol = setting("TRAPLAB_SOLVER_TOL")
    precond = sparse.diags(1.0 / M.diagonal())
    columns = rhs.reshape(n, -1)
    out = np.empty_like(columns, dtype=float)
    for k in range(columns.shape[1]):
        sol, info = splinalg.cg(M, columns[:, k], rtol=tol, atol=0.0, maxiter=50 * n, M=precond)
        if info != 0:
            raise TrapLabError(f"conjugate gradient did not converge (info={info}) on {n} unknowns")
        out[:, k] = sol
    return out.reshape(rhs.shape)


def solve_dirichlet(g: Graph, boundary: Iterable[int], values: np.ndarray) -> np.ndarray:
    """Harmonic extension: h = values on the boundary, (P h) = h elsewhere.

    `values` is indexed like sorted(boundary); a 2-D array solves one
    problem per column.
    """
    idx, interior = _split(g, boundary)
    values = np.asarray(values, dtype=float)
    if values.shape[0] != idx.size:
        raise InputError(f"need {idx.size} boundary values, got {values.shape[0]}")
    out = np.zeros((g.n_vertices,) + values.shape[1:])
    out[idx] = values
    if interior.size:
        L = laplacian(g)
        L_II = L[interior][:, interior]
        rhs = -(L[interior][:, idx] @ values)
        out[interior] = spd_solve(L_II, rhs)
    return out


def solve_killed(g: Graph, killing: Iterable[int], source: np.ndarray) -> np.ndarray:
    """z = L_II^{-1} source_I on the interior, 0 on the killing set.

    With source = deg * W * f this is E_x[int_0^{H_K} f(X_t) dt].
    """
    idx, interior = _split(g, killing)
    out = np.zeros(g.n_vertices)
    if interior.size:
        L = laplacian(g)
        out[interior] = spd_solve(L[interior][:, interior], np.asarray(source, dtype=float)[interior])
    return out
