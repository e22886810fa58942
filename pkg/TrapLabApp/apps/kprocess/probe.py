# apps/kprocess/probe.py
# --------------------------------
# Monte Carlo probe of finite-state approximations X_N converging to the
# K-process: per N, compare the hitting state of {1..n}, the first holding
# time at y, and phi(X(t)) at fixed times against the limit process.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from apps.core.exceptions import InputError
from apps.core.random_source import RandomLike, as_generator
from apps.harness.stats import FitResult, chi_square, ks_exponential, ks_two_sample
from apps.kprocess.params import INFINITY, KParams, embed_state
from apps.kprocess.sampler import hitting_law, hitting_law_exact, sample_kprocess

logger = logging.getLogger(__name__)

# Censoring level of the first-hold samples, in units of Z_y
HOLD_CAP = 40.0


@dataclass(frozen=True)
class ProbeRow:
    index: int
    k_max: int
    tail: float
    hit: FitResult
    hold: FitResult
    values: Dict[float, FitResult]


@dataclass
class ProbeReport:
    rows: List[ProbeRow] = field(default_factory=list)
    tail_profile: Tuple[float, ...] = ()

    def hit_statistics(self) -> List[float]:
        return [r.hit.statistic for r in self.rows]

    def hold_statistics(self) -> List[float]:
        return [r.hold.statistic for r in self.rows]

    def trend_decreasing(self) -> bool:
        """Hitting-law statistic of the last N below that of the first."""
        stats = self.hit_statistics()
        return len(stats) < 2 or stats[-1] < stats[0]

    def to_records(self) -> List[Dict]:
        out = []
        for r in self.rows:
            record = {
                "index": r.index,
                "k_max": r.k_max,
                "tail": r.tail,
                "hit_chi2": r.hit.statistic,
                "hit_pvalue": r.hit.pvalue,
                "hold_ks": r.hold.statistic,
                "hold_pvalue": r.hold.pvalue,
            }
            for t, fit in r.values.items():
                record[f"value_ks@{t:g}"] = fit.statistic
            out.append(record)
        return out


def _tail_mass(p: KParams, m: int) -> float:
    """sum_{k > m} Z_k u_k including the recorded tail."""
    return math.fsum((p.Z[m:] * p.u[m:]).tolist()) + p.tail_bound


def check_tail_condition(sequence: Sequence[KParams], m: int, tolerance: float) -> Tuple[float, ...]:
    """sup_N of the tail beyond m, for m' = 1..m; rejects when the tail beyond m
    keeps more than `tolerance` of the largest total mass."""
    profile = tuple(max(_tail_mass(p, j) for p in sequence) for j in range(1, m + 1))
    total = max(p.mass + p.tail_bound for p in sequence)
    if not math.isfinite(total) or profile[-1] > tolerance * total:
        raise InputError(
            f"tail condition fails: sup_N tail beyond {m} is {profile[-1]:.4g} of total {total:.4g}"
        )
    return profile


def first_holds(p: KParams, y: int, n: int, gen: np.random.Generator) -> np.ndarray:
    cap = HOLD_CAP * p.Z_of(y)
    holds = np.empty(n)
    for i in range(n):
        holds[i] = sample_kprocess(p, y, cap, gen).first_hold
    return holds


def _values_at(p: KParams, y: int, horizon: float, times: Sequence[float], n: int, gen: np.random.Generator) -> np.ndarray:
    out = np.empty((n, len(times)))
    for i in range(n):
        path = sample_kprocess(p, y, horizon, gen).trajectory
        out[i] = [embed_state(int(path.value_at(t))) for t in times]
    return out


def convergence_probe(
    pN_sequence: Sequence[KParams],
    p_limit: KParams,
    horizon: float,
    n_samples: int,
    rng: RandomLike,
    y: int = 1,
    n_hit: int = 3,
    fixed_times: Optional[Sequence[float]] = None,
    tail_tolerance: float = 0.5,
) -> ProbeReport:
    """Compare each X_N against the limit; acceptance is a trend, not a proof."""
    if not pN_sequence:
        raise InputError("need at least one approximating parameter set")
    k_common = min([p.k_max for p in pN_sequence] + [p_limit.k_max])
    if not 1 <= n_hit <= k_common:
        raise InputError(f"n_hit must be in 1..{k_common}, got {n_hit}")
    if not 1 <= y <= k_common:
        raise InputError(f"start state {y} not in 1..{k_common}")
    if not horizon > 0:
        raise InputError(f"horizon must be positive, got {horizon}")
    times = tuple(fixed_times) if fixed_times is not None else (0.25 * horizon, 0.5 * horizon, 0.75 * horizon)
    if any(not 0 <= t < horizon for t in times):
        raise InputError(f"fixed times must lie in [0, {horizon})")

    m = max(n_hit, k_common // 2)
    profile = check_tail_condition(pN_sequence, m, tail_tolerance)
    gen = as_generator(rng)
    A = list(range(1, n_hit + 1))
    limit_law = hitting_law_exact(p_limit, A)
    limit_values = _values_at(p_limit, y, horizon, times, n_samples, gen)

    report = ProbeReport(tail_profile=profile)
    for index, pN in enumerate(pN_sequence):
        law = hitting_law(pN, A, n_samples, gen, y=INFINITY)
        hit = chi_square([law[a] * n_samples for a in A], limit_law.aligned(A))
        hold = ks_exponential(first_holds(pN, y, n_samples, gen), pN.Z_of(y))
        values = _values_at(pN, y, horizon, times, n_samples, gen)
        value_fits = {t: ks_two_sample(values[:, j], limit_values[:, j]) for j, t in enumerate(times)}
        row = ProbeRow(index, pN.k_max, _tail_mass(pN, m), hit, hold, value_fits)
        logger.info(
            f"[convergence_probe] N#{index} K={pN.k_max}: chi2={hit.statistic:.4g} "
            f"hold KS={hold.statistic:.4g}"
        )
        report.rows.append(row)
    return report
