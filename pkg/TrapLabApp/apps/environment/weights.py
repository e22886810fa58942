# apps/environment/weights.py
# --------------------------------
# Heavy-tailed trap depths.
# Pareto law P[W > t] = t^-alpha (t >= 1), its normalizer c_k = k^(-1/alpha),
# and the coupling of a finite environment with the limiting Poisson weights
# through one stream of standard exponentials:
#   Gamma_j = E_1 + ... + E_j
#   finite ranked depths  W_(j) = (Gamma_j / Gamma_{n+1})^(-1/alpha)
#   limit weights         w_j   = Gamma_j^(-1/alpha)

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import InputError
from apps.core.random_source import RandomLike, as_generator
from apps.environment.environment import Environment
from apps.graphs.graph import Graph

logger = logging.getLogger(__name__)


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")


# ============================================================
# Pareto depths
# ============================================================
def pareto_from_uniform(u: np.ndarray, alpha: float) -> np.ndarray:
    """Inverse transform W = U^(-1/alpha) for U in (0, 1]."""
    return np.power(u, -1.0 / alpha)


def sample_pareto_weights(n: int, alpha: float, rng: RandomLike) -> np.ndarray:
    _check_alpha(alpha)
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    u = 1.0 - as_generator(rng).random(n)
    return pareto_from_uniform(u, alpha)


def normalizer_c(k: int, alpha: float) -> float:
    """c_k = k^(-1/alpha): the typical size of the largest of k depths, inverted."""
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    return float(k) ** (-1.0 / alpha)


# ============================================================
# Limit weights
# ============================================================
@dataclass(frozen=True)
class LimitWeights:
    weights: Tuple[float, ...]
    alpha: float

    def __post_init__(self):
        if any(b >= a for a, b in zip(self.weights, self.weights[1:])):
            raise InputError("limit weights must be strictly decreasing")

    @property
    def truncation(self) -> int:
        return len(self.weights)

    @property
    def tail_bound(self) -> float:
        """Estimate of sum_{j>J} w_j from E[Gamma_j^(-1/alpha)] ~ j^(-1/alpha).

        The integral bound gives J^(1 - 1/alpha) / (1/alpha - 1).
        """
        J = self.truncation
        s = 1.0 / self.alpha
        return J ** (1.0 - s) / (s - 1.0)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights)


def sample_limit_weights(J: int, alpha: float, rng: RandomLike) -> LimitWeights:
    """w_j = Gamma_j^(-1/alpha), j <= J, without a finite environment."""
    _check_alpha(alpha)
    if J < 1:
        raise InputError(f"truncation must be positive, got {J}")
    gammas = np.cumsum(as_generator(rng).standard_exponential(J))
    return LimitWeights(tuple(np.power(gammas, -1.0 / alpha).tolist()), alpha)


def coupled_environment(
    g: Graph,
    alpha: float,
    rng: RandomLike,
    truncation: Optional[int] = None,
    seed: Optional[int] = None,
) -> Tuple[Environment, LimitWeights]:
    """Finite environment on g and limit weights w_1 > ... > w_J from shared exponentials."""
    _check_alpha(alpha)
    n = g.n_vertices
    if n < 2:
        raise InputError("coupled environment needs at least 2 vertices")
    J = truncation or setting("TRAPLAB_LIMIT_TRUNCATION")
    gen = as_generator(rng)

    exps = gen.standard_exponential(max(n + 1, J))
    gammas = np.cumsum(exps)
    ranked_depths = np.power(gammas[:n] / gammas[n], -1.0 / alpha)
    limit = LimitWeights(tuple(np.power(gammas[:J], -1.0 / alpha).tolist()), alpha)

    enumeration = gen.permutation(n)
    depths = np.empty(n)
    depths[enumeration] = ranked_depths
    env = Environment(g, depths, tuple(enumeration.tolist()), alpha, seed)
    logger.debug(f"[coupled_environment] n={n} alpha={alpha} W_(1)={ranked_depths[0]:.6g} w_1={limit.weights[0]:.6g}")
    return env, limit


def coupling_discrepancy(env: Environment, limit: LimitWeights, k: int = 20) -> float:
    """sum_{j<=k} |c_n W_(j) - w_j|."""
    c = normalizer_c(env.n_vertices, limit.alpha)
    k = min(k, env.n_vertices, limit.truncation)
    ranked = env.depth_of[list(env.ranked_vertices[:k])]
    return float(np.sum(np.abs(c * ranked - limit.as_array()[:k])))


def assign_weights(g: Graph, weights: Sequence[float], rng: RandomLike, alpha: Optional[float] = None) -> Environment:
    """Place given depths on a uniformly random vertex enumeration."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (g.n_vertices,):
        raise InputError(f"need {g.n_vertices} weights, got {w.size}")
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise InputError("weights must be finite and positive")
    # stable sort on -w keeps original index order among ties
    ranked = w[np.argsort(-w, kind="stable")]
    enumeration = as_generator(rng).permutation(g.n_vertices)
    depths = np.empty(g.n_vertices)
    depths[enumeration] = ranked
    return Environment(g, depths, tuple(enumeration.tolist()), alpha)
