# apps/harness/ktest.py
# --------------------------------
# K-process law tests. run_ktest checks the sampler on random parameter sets;
# kprocess_self_test pushes K-process paths through the same trace statistics
# the convergence experiment applies to walks, where every test is at null.

from __future__ import annotations

import logging
from typing import List, Optional

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import InputError
from apps.core.random_source import RandomSource
from apps.core.trajectory import Trajectory
from apps.environment.weights import sample_limit_weights
from apps.harness.report import Report, TestRecord
from apps.harness.stats import chi_square, ks_exponential
from apps.kprocess.params import INFINITY, KParams
from apps.kprocess.probe import first_holds
from apps.kprocess.sampler import hitting_law, hitting_law_exact, sample_kprocess, trace_on

logger = logging.getLogger(__name__)

MIN_STATES, MAX_STATES = 3, 12


def random_kparams(gen: np.random.Generator) -> KParams:
    """Z from limit weights with alpha in [0.3, 0.8], u uniform on [0.2, 2]."""
    K = int(gen.integers(MIN_STATES, MAX_STATES + 1))
    alpha = float(gen.uniform(0.3, 0.8))
    limit = sample_limit_weights(K, alpha, gen)
    return KParams(limit.as_array(), gen.uniform(0.2, 2.0, K), limit.tail_bound)


def law_records(
    p: KParams, label: str, n_samples: int, gen: np.random.Generator, significance: float
) -> List[TestRecord]:
    """Hitting law of a random {1..n} from infinity and the hold at a random state."""
    n = int(gen.integers(2, p.k_max + 1))
    A = list(range(1, n + 1))
    law = hitting_law(p, A, n_samples, gen)
    hit = chi_square([law[a] * n_samples for a in A], hitting_law_exact(p, A).aligned(A))
    y = int(gen.integers(1, p.k_max + 1))
    hold = ks_exponential(first_holds(p, y, n_samples, gen), p.Z_of(y))
    return [
        TestRecord.from_fit(f"{label}_hitting_top{n}", hit, significance),
        TestRecord.from_fit(f"{label}_holding_state{y}", hold, significance),
    ]


def run_ktest(
    n_sets: int,
    n_samples: int,
    seed: int,
    significance: Optional[float] = None,
) -> Report:
    if n_sets < 1:
        raise InputError(f"need at least one parameter set, got {n_sets}")
    level = significance if significance is not None else setting("TRAPLAB_SIGNIFICANCE")
    root = RandomSource(seed)
    report = Report(provenance={"seed": seed, "n_sets": n_sets, "n_samples": n_samples})
    for i in range(n_sets):
        gen = root.spawn(i).generator
        p = random_kparams(gen)
        for record in law_records(p, f"set{i}", n_samples, gen, level):
            report.add(record)
        report.summaries[f"set{i}"] = p.to_dict()
    logger.info(f"[run_ktest] {n_sets} sets: {len(report.tests) - len(report.failures)}/{len(report.tests)} passed")
    return report


# ============================================================
# Self-test through the trace statistics
# ============================================================
def _landing_in(path: Trajectory, n: int) -> Optional[int]:
    for state in path.states.tolist():
        if 1 <= state <= n:
            return int(state)
    return None


def _traced_landing(p: KParams, M: int, n: int, gen: np.random.Generator) -> int:
    """First state of {1..n} seen on the K-process traced on {1..M}, from infinity."""
    span = 1.0
    while True:
        path = sample_kprocess(p, INFINITY, span, gen).trajectory
        if any(1 <= s <= M for s in path.states.tolist()):
            landing = _landing_in(trace_on(path, range(1, M + 1)), n)
            if landing is not None:
                return landing
        span *= 2.0


def kprocess_self_test(
    p: KParams,
    M: int,
    n_hit: int,
    n_samples: int,
    seed: int,
    significance: Optional[float] = None,
) -> Report:
    """Trace statistics on K-process samples; every test should pass at its nominal rate."""
    if not 1 <= n_hit <= M <= p.k_max:
        raise InputError(f"need 1 <= n_hit <= M <= {p.k_max}, got n_hit={n_hit}, M={M}")
    level = significance if significance is not None else setting("TRAPLAB_SIGNIFICANCE")
    gen = RandomSource(seed).generator
    report = Report(provenance={"seed": seed, "M": M, "n_hit": n_hit, "n_samples": n_samples, "kparams": p.to_dict()})

    landings = [_traced_landing(p, M, n_hit, gen) for _ in range(n_samples)]
    counts = [landings.count(j) for j in range(1, n_hit + 1)]
    A = list(range(1, n_hit + 1))
    report.add(
        TestRecord.from_fit(f"hitting_law_top{n_hit}", chi_square(counts, hitting_law_exact(p, A).aligned(A)), level)
    )
    for j in A:
        holds = first_holds(p, j, n_samples, gen)
        report.add(TestRecord.from_fit(f"holding_time_rank{j}", ks_exponential(holds, p.Z_of(j)), level))
    report.summaries["landings"] = {"counts": counts}
    return report
