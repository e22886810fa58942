# apps/exact/certificates.py
# --------------------------------
# Exact left/right sides of the hitting-distribution bounds, exported as
# {instance, lhs, rhs, pass} records.

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Union

import numpy as np

from apps.core.exceptions import InputError
from apps.exact.hitting import (
    equilibrium_hit,
    escape_probability_exact,
    gamma_ell,
    harmonic_measure,
    return_hit_distribution,
    vertex_tuple,
)
from apps.exact.mixing import finite_horizon_hit, mixing_time
from apps.exact.solvers import GraphLike, graph_of
from apps.graphs.graph import check_separation

# Absolute slack for round-off in the exact evaluations
SLACK = 1e-12


@dataclass(frozen=True)
class Certificate:
    instance: str
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + SLACK

    def to_record(self) -> Dict:
        return {"instance": self.instance, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}


def write_certificates(certificates: Iterable[Certificate], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([c.to_record() for c in certificates], fh, indent=2, sort_keys=True)


def _exterior_max(g, A: Sequence[int], ell: int, values: np.ndarray) -> float:
    outside = g.exterior(A, ell)
    if not outside:
        raise InputError(f"R(A, {ell}) is empty")
    return float(np.max(values[list(outside)]))


def lemma_s01_certificate(
    env: GraphLike, A: Sequence[int], z: int, L: int, t_mix: Optional[int] = None
) -> Certificate:
    """sum_j |P_z[X_{H_A} = x_j] - p(x_j, A)| <= 2 (2^-L + P_z[H_A < L t_mix])."""
    g = graph_of(env)
    A = vertex_tuple(g, A)
    if z in A:
        raise InputError(f"start {z} must lie outside A")
    t_mix = t_mix or mixing_time(g)
    order, H = harmonic_measure(g, A)
    p = equilibrium_hit(g, A).aligned(order)
    lhs = math.fsum(np.abs(H[z] - p).tolist())
    early = finite_horizon_hit(g, A, L * t_mix, strict=True)[z]
    rhs = 2.0 * (2.0**-L + early)
    return Certificate(f"s01 z={z} |A|={len(A)} L={L} t_mix={t_mix}", lhs, rhs)


def lemma_s01_local_certificate(
    env: GraphLike, A: Sequence[int], i: int, ell: int, L: int, t_mix: Optional[int] = None
) -> Certificate:
    """Return from x_i in A to the other traps.

    sum_{j != i} |P_{x_i}[X_{H^+_A} = x_j] - v_ell(x_i) p(x_j, A)|
        <= 2 v_ell(x_i) max_{z in R(A, ell)} (2^-L + P_z[H_A < L t_mix])
    """
    g = graph_of(env)
    A = vertex_tuple(g, A)
    check_separation(g, A, ell)
    x = A[i]
    t_mix = t_mix or mixing_time(g)
    v = escape_probability_exact(g, x, ell)
    returned = return_hit_distribution(g, x, A)
    p = equilibrium_hit(g, A)
    lhs = math.fsum(abs(returned[y] - v * p[y]) for y in A if y != x)
    early = finite_horizon_hit(g, A, L * t_mix, strict=True)
    rhs = 2.0 * v * (2.0**-L + _exterior_max(g, A, ell, early))
    return Certificate(f"s01-local x={x} ell={ell} L={L} t_mix={t_mix}", lhs, rhs)


def lemma_s03_certificate(
    env: GraphLike, A: Sequence[int], ell: int, L: int, t_mix: Optional[int] = None
) -> Certificate:
    """max_i |p(x_i, A) - deg(x_i) v_ell(x_i) / Gamma_ell(A)|
    <= 2 max_{z in R(A, ell)} (2^-L + P_z[H_A <= L t_mix])."""
    g = graph_of(env)
    A = vertex_tuple(g, A)
    check_separation(g, A, ell)
    t_mix = t_mix or mixing_time(g)
    p = equilibrium_hit(g, A)
    gamma = gamma_ell(g, A, ell)
    lhs = max(abs(p[x] - g.degree(x) * escape_probability_exact(g, x, ell) / gamma) for x in A)
    hit = finite_horizon_hit(g, A, L * t_mix, strict=False)
    rhs = 2.0 * (2.0**-L + _exterior_max(g, A, ell, hit))
    return Certificate(f"s03 |A|={len(A)} ell={ell} L={L} t_mix={t_mix}", lhs, rhs)


def kappa(env: GraphLike, A: Sequence[int], ell: int, L: int, t_mix: Optional[int] = None) -> float:
    """max_{x in A} max_{z outside B(x, ell)} P_z[H_x < L t_mix]."""
    g = graph_of(env)
    t_mix = t_mix or mixing_time(g)
    worst = 0.0
    for x in vertex_tuple(g, A):
        hit = finite_horizon_hit(g, [x], L * t_mix, strict=True)
        far = list(g.exterior(x, ell))
        if far:
            worst = max(worst, float(np.max(hit[far])))
    return worst
