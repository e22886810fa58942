# apps/exact/mixing.py
# --------------------------------
# Lazy-chain mixing time and finite-horizon hitting probabilities.

from __future__ import annotations

import logging
from typing import Iterable, List, Optional

import numpy as np
from scipy import sparse

from apps.core.conf import setting
from apps.core.exceptions import InputError, SizeError
from apps.exact.hitting import stationary_pi
from apps.exact.solvers import GraphLike, graph_of
from apps.graphs.graph import Graph

logger = logging.getLogger(__name__)

MIXING_THRESHOLD = 0.25


def lazy_transition(g: Graph, dense: bool = True):
    """P(x, x) = 1/2, P(x, y) = 1/(2 deg x) for y ~ x."""
    inv_deg = sparse.diags(0.5 / g.degrees.astype(float))
    P = sparse.identity(g.n_vertices, format="csr") * 0.5 + inv_deg @ g.adjacency_matrix
    return P.toarray() if dense else P.tocsr()


def _max_tv(M: np.ndarray, pi: np.ndarray) -> float:
    """Worst row's total-variation distance to pi (half l1)."""
    return float(0.5 * np.max(np.sum(np.abs(M - pi), axis=1)))


def _check_dense_size(g: Graph) -> None:
    limit = setting("TRAPLAB_DENSE_LIMIT")
    if g.n_vertices > limit:
        raise SizeError(f"{g.n_vertices} vertices exceeds the dense-matrix limit {limit}")


def tv_profile(g: GraphLike, n_steps: int) -> List[float]:
    """max_x ||P^n(x, .) - pi||_TV for n = 1..n_steps."""
    g = graph_of(g)
    _check_dense_size(g)
    P = lazy_transition(g)
    pi = stationary_pi(g).mass
    M = P.copy()
    out = []
    for _ in range(n_steps):
        out.append(_max_tv(M, pi))
        M = M @ P
    return out


def mixing_time(g: GraphLike, max_steps: Optional[int] = None) -> int:
    """Least n >= 1 with max_x ||P^n(x, .) - pi||_TV <= 1/4 for the lazy chain.

    TV decay is monotone for the lazy reversible chain, so repeated squaring
    brackets the answer and a binary descent over the stored powers pins it.
    """
    g = graph_of(g)
    _check_dense_size(g)
    cap = max_steps or setting("TRAPLAB_HORIZON_CAP")
    pi = stationary_pi(g).mass
    powers = [lazy_transition(g)]
    if _max_tv(powers[0], pi) <= MIXING_THRESHOLD:
        return 1
    while _max_tv(powers[-1], pi) > MIXING_THRESHOLD:
        if 2 ** len(powers) > 2 * cap:
            raise SizeError(f"mixing time exceeds {cap} steps")
        powers.append(powers[-1] @ powers[-1])

    # powers[k] = P^(2^k); P^lo is known not to have mixed
    lo = 2 ** (len(powers) - 2)
    M = powers[-2]
    for j in range(len(powers) - 3, -1, -1):
        candidate = M @ powers[j]
        if _max_tv(candidate, pi) > MIXING_THRESHOLD:
            M = candidate
            lo += 2**j
    t_mix = lo + 1
    logger.debug(f"[mixing_time] {g!r}: t_mix = {t_mix}")
    return t_mix


def finite_horizon_hit(g: GraphLike, A: Iterable[int], n: int, strict: bool = True) -> np.ndarray:
    """Per-vertex P_z[H_A < n] (strict) or P_z[H_A <= n] for the lazy chain.

    A is made absorbing and q_k = 1_A + 1_{A^c} (P q_{k-1}) is iterated,
    so q_k(z) = P_z[H_A <= k].
    """
    g = graph_of(g)
    if n < 0:
        raise InputError(f"horizon must be nonnegative, got {n}")
    cap = setting("TRAPLAB_HORIZON_CAP")
    if n > cap:
        raise SizeError(f"horizon {n} exceeds the cap of {cap} steps")
    in_A = np.zeros(g.n_vertices, dtype=bool)
    in_A[list(A)] = True
    steps = n - 1 if strict else n
    if steps < 0:
        return np.zeros(g.n_vertices)
    P = lazy_transition(g, dense=False)
    q = in_A.astype(float)
    for _ in range(steps):
        q = np.where(in_A, 1.0, P @ q)
    return q
