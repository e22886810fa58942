# apps/harness/time_scales.py
# --------------------------------
# Ergodic time scale beta_N: the realized value from the sampled graph and
# the closed forms it is expected to approach.

from __future__ import annotations

import math
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from apps.core.exceptions import InputError
from apps.environment.weights import normalizer_c
from apps.graphs.generators import giant_fraction

TRANSITIVE_KINDS = ("hypercube", "torus", "regular")

# Escape probability of simple random walk on Z^d (1 - return probability)
ZD_ESCAPE = {3: 1.0 - 0.340537329550999, 4: 1.0 - 0.193206281996}


def realized_time_scale(kind: str, n_vertices: int, alpha: float, escape_top: float, N: Optional[int] = None, lam: Optional[float] = None) -> float:
    """beta_N as the limit theorems fix it for this kind of graph.

    Transitive kinds: 1 / (c_V v_ell(x_1)).
    Erdos-Renyi giant: (giant fraction * N)^(1/alpha).
    """
    c = normalizer_c(n_vertices, alpha)
    if kind in TRANSITIVE_KINDS:
        if not escape_top > 0:
            raise InputError("escape probability of x_1 must be positive")
        return 1.0 / (c * escape_top)
    if kind == "er_giant":
        if N is None or lam is None:
            raise InputError("er_giant time scale needs N and lam")
        return (giant_fraction(lam) * N) ** (1.0 / alpha)
    return 1.0 / c


def reference_time_scale(kind: str, params: Mapping, n_vertices: int, alpha: float) -> Optional[float]:
    """Closed-form approximation of beta_N; None when no closed form is known."""
    c = normalizer_c(n_vertices, alpha)
    if kind == "hypercube":
        return 1.0 / c
    if kind == "torus":
        d = params["d"]
        if d == 2:
            return (2.0 / math.pi) * math.log(params["N"]) / c
        if d in ZD_ESCAPE:
            return 1.0 / (c * ZD_ESCAPE[d])
        return None
    if kind == "regular":
        d = params["d"]
        return (d - 1) / ((d - 2) * c)
    if kind == "er_giant":
        return (giant_fraction(params["lam"]) * params["N"]) ** (1.0 / alpha)
    return None


def regular_tree_escape(d: int, ell: int) -> float:
    """Escape from the root of a d-regular tree to distance ell + 1:
    (d-2)/(d-1) / (1 - (d-1)^-(ell+1)).

    Same convention as escape_probability_exact: escaping means reaching
    R(x, ell) = {d > ell}, so the exponent is ell + 1.
    """
    if d < 3:
        raise InputError(f"d must be at least 3, got {d}")
    return (d - 2) / (d - 1) / (1.0 - float(d - 1) ** -(ell + 1))


def shallow_time_budget(shallow_mass: float, n_cycles: float, beta: float) -> float:
    """K nu(V \\ A) / (beta nu(A)), the d_T budget spent outside the deep traps."""
    if not 0 <= shallow_mass < 1:
        raise InputError(f"shallow mass must lie in [0, 1), got {shallow_mass}")
    return n_cycles * shallow_mass / (beta * (1.0 - shallow_mass))


def summarize(values: Sequence[float]) -> Dict:
    """Mean and quartiles of a sample, for report summaries."""
    if not len(values):
        return {"n": 0}
    x = np.asarray(values, dtype=float)
    q1, q2, q3 = np.quantile(x, [0.25, 0.5, 0.75]).tolist()
    return {"n": int(x.size), "mean": float(x.mean()), "q1": q1, "median": q2, "q3": q3}
