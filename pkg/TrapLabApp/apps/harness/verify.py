# apps/harness/verify.py
# --------------------------------
# Exact-oracle and statistical verification suites. Each suite returns
# TestRecords; run_verify collects the requested suites into a Report.
# quick=True shrinks every suite to test-run sizes.

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from apps.core.exceptions import DegenerateSampleError
from apps.core.random_source import RandomSource
from apps.core.trajectory import Trajectory, step_function
from apps.environment.weights import (
    assign_weights,
    coupled_environment,
    coupling_discrepancy,
    sample_limit_weights,
    sample_pareto_weights,
)
from apps.exact.certificates import (
    Certificate,
    lemma_s01_certificate,
    lemma_s01_local_certificate,
    lemma_s03_certificate,
)
from apps.exact.hitting import capacity, escape_probability_exact, rho_exact
from apps.exact.mixing import mixing_time
from apps.exact.occupation import mean_cycle_length_exact, occupation_identity
from apps.graphs.generators import erdos_renyi_giant, giant_fraction, torus
from apps.graphs.trees import regular_tree
from apps.harness.experiment import separate_deep_traps
from apps.harness.report import Report, TestRecord
from apps.harness.stats import chi_square, ks_frechet
from apps.harness.time_scales import regular_tree_escape
from apps.metric.distances import d_T, d_T2, modulus
from apps.walks.simulate import escape_probability_mc
from apps.walks.trace import excursion_decomposition

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-10
OCCUPATION_TOL = 1e-9
METRIC_SLACK = 1e-12
METRIC_SEGMENTS = 10


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _small_random_graph(gen: np.random.Generator, max_vertices: int = 50):
    """Connected graph of at most max_vertices: an Erdos-Renyi giant component."""
    while True:
        try:
            g, _ = erdos_renyi_giant(int(gen.integers(20, max_vertices + 1)), float(gen.uniform(2.0, 4.0)), gen)
        except DegenerateSampleError:
            continue
        if g.n_vertices >= 4:
            return g


# ============================================================
# Exact identities
# ============================================================
def capacity_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    """Dirichlet-form and boundary-flux capacity agree on random weighted graphs."""
    gen = source.generator
    worst = 0.0
    for _ in range(10 if quick else 100):
        g = _small_random_graph(gen)
        env = assign_weights(g, sample_pareto_weights(g.n_vertices, 0.5, gen), gen, 0.5)
        perm = gen.permutation(g.n_vertices).tolist()
        a = int(gen.integers(1, g.n_vertices // 2 + 1))
        b = int(gen.integers(1, g.n_vertices - a + 1))
        pair = capacity(env, perm[:a], perm[a : a + b])
        worst = max(worst, pair.relative_gap)
    return [TestRecord.from_bound("capacity_identity", worst, EXACT_TOL)]


def occupation_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    """Both sides of the occupation identity on separated trap sets."""
    gen = source.generator
    worst = 0.0
    for _ in range(5 if quick else 20):
        g = torus(9 if quick else 13, 2)
        env, _ = coupled_environment(g, 0.5, gen)
        env, _ = separate_deep_traps(env, 3, 1, gen, 1000)
        f = gen.uniform(-1.0, 1.0, g.n_vertices)
        lhs, rhs = occupation_identity(env, env.deep_traps(3), 1, f)
        worst = max(worst, _relative(lhs, rhs))
    return [TestRecord.from_bound("occupation_identity", worst, OCCUPATION_TOL)]


def certificate_suite(source: RandomSource, quick: bool = False) -> List[Certificate]:
    """Hitting-distribution bounds on separated configurations on tori."""
    gen = source.generator
    sides = (7, 9) if quick else (11, 15, 21, 31)
    Ls = (4,) if quick else (4, 8, 12)
    configs = 4 if quick else 20
    out: List[Certificate] = []
    t_mix = {N: mixing_time(torus(N, 2)) for N in sides}
    for k in range(configs):
        N = sides[k % len(sides)]
        L = Ls[k % len(Ls)]
        ell = 1 if N < 15 else 2
        g = torus(N, 2)
        env, _ = coupled_environment(g, 0.5, gen)
        env, _ = separate_deep_traps(env, 3, ell, gen, 1000)
        A = env.deep_traps(3)
        z = next(x for x in gen.permutation(g.n_vertices).tolist() if x not in A)
        tag = f"#{k} torus({N},2)"
        found = (
            lemma_s01_certificate(env, A, z, L, t_mix[N]),
            lemma_s01_local_certificate(env, A, k % 3, ell, L, t_mix[N]),
            lemma_s03_certificate(env, A, ell, L, t_mix[N]),
        )
        out.extend(replace(c, instance=f"{tag} {c.instance}") for c in found)
    return out


def regular_escape_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    """Escape at the root of a depth-8 3-regular tree with ell = 5: exact and Monte Carlo."""
    g = regular_tree(3, 8).as_graph()
    exact = escape_probability_exact(g, 0, 5)
    formula = regular_tree_escape(3, 5)
    mc = escape_probability_mc(g, 0, 5, 10_000 if quick else 100_000, source.generator)
    return [
        TestRecord.from_bound("regular_escape_exact", abs(exact - formula), EXACT_TOL),
        TestRecord.from_bound("regular_escape_mc", abs(mc.value - exact), 3.0 * mc.stderr),
    ]


def trace_stationary_suite(source: RandomSource, quick: bool = False, significance: float = 0.01) -> List[TestRecord]:
    """Landing frequencies of the trace chain against rho; mean cycle length against its closed form."""
    gen = source.generator
    g = torus(15, 2)
    env, _ = coupled_environment(g, 0.5, gen)
    env, _ = separate_deep_traps(env, 3, 3, gen, 1000)
    A = env.deep_traps(3)
    stats = excursion_decomposition(env, A, 3, 5_000 if quick else 100_000, A[0], gen)
    counts = stats.visit_counts
    rho = rho_exact(env, A, 3)
    fit = chi_square([counts[x] for x in A], rho.aligned(A))
    expected = mean_cycle_length_exact(env, A, 3)
    return [
        TestRecord.from_fit("trace_landing_rho", fit, significance),
        TestRecord.from_bound(
            "trace_mean_cycle_length", _relative(stats.mean_cycle_length, expected), 0.05 if quick else 0.02
        ),
    ]


# ============================================================
# Environment laws
# ============================================================
def frechet_suite(source: RandomSource, quick: bool = False, significance: float = 0.01) -> List[TestRecord]:
    """Largest limit weight w_1 against the CDF exp(-t^-alpha)."""
    n = 2_000 if quick else 100_000
    out = []
    for i, alpha in enumerate((0.3, 0.5, 0.8)):
        gen = source.spawn(i).generator
        w1 = [sample_limit_weights(1, alpha, gen).weights[0] for _ in range(n)]
        out.append(TestRecord.from_fit(f"frechet_alpha{alpha:g}", ks_frechet(w1, alpha), significance))
    return out


def coupling_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    """Mean coupling discrepancy strictly decreases in |V|; every size reuses the same seeds."""
    sizes = (100, 1_000, 10_000)
    seeds = 20 if quick else 100
    means = []
    for n in sizes:
        g = torus(n, 1)
        values = [
            coupling_discrepancy(*coupled_environment(g, 0.5, source.spawn(s).generator))
            for s in range(seeds)
        ]
        means.append(float(np.mean(values)))
    return [
        TestRecord(f"coupling_trend_{a}_{b}", means[j + 1], means[j], means[j + 1] < means[j])
        for j, (a, b) in enumerate(zip(sizes, sizes[1:]))
    ]


def giant_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    """|C_max| / N against the fixed point of v = 1 - exp(-lam v)."""
    N = 2_000 if quick else 10_000
    seeds = 5 if quick else 20
    tol = 0.04 if quick else 0.02
    out = []
    for i, lam in enumerate((2.0, 4.0)):
        target = giant_fraction(lam)
        worst = 0.0
        for s in range(seeds):
            g, _ = erdos_renyi_giant(N, lam, source.spawn(100 * i + s).generator)
            worst = max(worst, abs(g.n_vertices / N - target))
        out.append(TestRecord.from_bound(f"giant_fraction_lam{lam:g}", worst, tol))
    return out


# ============================================================
# Metric
# ============================================================
def random_step_function(gen: np.random.Generator, max_segments: int, horizon: float = 1.0) -> Trajectory:
    """Step function with 1..max_segments pieces and small-integer values (ties included)."""
    k = int(gen.integers(1, max_segments + 1))
    breaks = np.sort(gen.uniform(0.0, horizon, k - 1))
    values = gen.integers(0, 4, k).astype(float)
    return step_function([0.0] + breaks.tolist() + [horizon], values.tolist())


def d_T_brute_force(f: Trajectory, g: Trajectory, chunk: int = 1 << 15) -> float:
    """min over unions A of elementary intervals of sup_{A^c} |f - g| + Leb(A)."""
    grid = np.unique(np.concatenate(([0.0, f.horizon], f.jump_times, g.jump_times)))
    mids = (grid[:-1] + grid[1:]) / 2.0
    diff = np.abs(np.asarray([f.value_at(t) - g.value_at(t) for t in mids], dtype=float))
    lengths = np.diff(grid)
    bits = np.arange(diff.size)
    best = np.inf
    # One row per subset, encoded by the bits of its index
    for first in range(0, 1 << diff.size, chunk):
        masks = (np.arange(first, min(first + chunk, 1 << diff.size))[:, None] >> bits) & 1
        chosen = masks.astype(bool)
        cost = np.where(chosen, 0.0, diff).max(axis=1) + masks @ lengths
        best = min(best, float(cost.min()))
    return best


def metric_suite(source: RandomSource, quick: bool = False) -> List[TestRecord]:
    gen = source.generator
    n = 300 if quick else 10_000
    # Subset enumeration is exponential in the breakpoints: brute force on the first n_oracle pairs only
    n_oracle = 30 if quick else 500
    oracle_gap = triangle_excess = inclusion_excess = 0.0
    for i in range(n):
        f, g, h = (random_step_function(gen, METRIC_SEGMENTS) for _ in range(3))
        if i < n_oracle:
            oracle_gap = max(oracle_gap, abs(d_T(f, g) - d_T_brute_force(f, g)))
        triangle_excess = max(triangle_excess, d_T(f, h) - d_T(f, g) - d_T(g, h))
        delta = d_T2(f, g)
        if delta > 0:
            inclusion_excess = max(inclusion_excess, d_T(f, g) - delta - modulus(f, 2.0 * delta))
        else:
            inclusion_excess = max(inclusion_excess, d_T(f, g))
    return [
        TestRecord.from_bound("d_T_brute_force", oracle_gap, METRIC_SLACK),
        TestRecord.from_bound("d_T_triangle", triangle_excess, METRIC_SLACK),
        TestRecord.from_bound("d_T2_inclusion", inclusion_excess, METRIC_SLACK),
    ]


# ============================================================
# Runner
# ============================================================
SUITES: Dict[str, Callable] = {
    "capacity": capacity_suite,
    "occupation": occupation_suite,
    "certificates": certificate_suite,
    "regular_escape": regular_escape_suite,
    "trace_stationary": trace_stationary_suite,
    "frechet": frechet_suite,
    "coupling": coupling_suite,
    "giant": giant_suite,
    "metric": metric_suite,
}


def run_verify(
    names: Optional[Sequence[str]],
    seed: int,
    quick: bool = False,
    significance: float = 0.01,
) -> tuple:
    """Run suites in SUITES order; returns (Report, certificates)."""
    chosen = list(SUITES) if not names else [n for n in SUITES if n in set(names)]
    report = Report(provenance={"suites": chosen, "seed": seed, "quick": quick})
    certificates: List[Certificate] = []
    root = RandomSource(seed)
    for index, name in enumerate(SUITES):
        if name not in chosen:
            continue
        source = root.spawn(index)
        if name == "certificates":
            found = certificate_suite(source, quick)
            certificates.extend(found)
            records = [TestRecord.from_certificate(c) for c in found]
        elif name in ("frechet", "trace_stationary"):
            records = SUITES[name](source, quick, significance)
        else:
            records = SUITES[name](source, quick)
        for record in records:
            report.add(record)
        logger.info(f"[run_verify] {name}: {sum(r.passed for r in records)}/{len(records)} passed")
    return report, certificates
