# apps/harness/experiment.py
# --------------------------------
# End-to-end convergence experiment.
#
# Graph and coupled environment from the seed, deep traps A = top M ranks
# (re-enumerated until separated), replicas of the cycle decomposition on A,
# then the trace statistics against the K-process predictions:
#   - first landing in the top n_hit traps vs u_j proportional to deg v
#   - trap holding times / beta_N vs Exponential(W_x / (beta_N v(x)))
#   - d_T between trace paths and K-process / Y-process paths (summaries)
# Replica r draws from stream spawn(100 + r); results are reduced in replica
# order, so the report does not depend on the worker count. Graphs within
# the dense limit also record the hitting-law certificates at horizon L t_mix.

from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import ConfigError, DegenerateSampleError, SizeError
from apps.core.random_source import RandomSource, as_generator
from apps.core.trajectory import Trajectory
from apps.environment.environment import Environment
from apps.environment.weights import LimitWeights, coupled_environment, coupling_discrepancy, normalizer_c
from apps.exact.certificates import lemma_s01_certificate, lemma_s03_certificate
from apps.exact.distribution import Distribution
from apps.exact.hitting import escape_probability_exact
from apps.exact.mixing import mixing_time
from apps.graphs.generators import erdos_renyi_giant, hypercube, random_regular, torus
from apps.graphs.graph import Graph, separation_violation
from apps.harness.config import ExperimentConfig, GraphSpec
from apps.harness.report import Report, TestRecord
from apps.harness.stats import chi_square, ks_exponential
from apps.harness.time_scales import (
    TRANSITIVE_KINDS,
    realized_time_scale,
    reference_time_scale,
    shallow_time_budget,
    summarize,
)
from apps.harness.tree_escape import estimate_tree_escape
from apps.kprocess.params import KParams, embed_state
from apps.kprocess.sampler import finite_chain, sample_kprocess, trace_on
from apps.metric.distances import d_T
from apps.walks.simulate import escape_probability_mc
from apps.walks.trace import CycleRecord, excursion_decomposition, y_process_params

logger = logging.getLogger(__name__)

# Stream layout under the experiment seed
GRAPH_STREAM, ENV_STREAM, ENUM_STREAM, ESCAPE_STREAM, TREE_STREAM = 0, 1, 2, 3, 4
REPLICA_STREAM_BASE = 100


# ============================================================
# Setup
# ============================================================
def build_graph(spec: GraphSpec, rng) -> Graph:
    """Graph for a config's graph section; ER samples are redrawn while degenerate."""
    if spec.kind == "hypercube":
        return hypercube(spec.n)
    if spec.kind == "torus":
        return torus(spec.N, spec.d)
    if spec.kind == "regular":
        return random_regular(spec.N, spec.d, rng)
    if spec.kind == "er_giant":
        gen = as_generator(rng)
        budget = setting("TRAPLAB_RETRY_BUDGET")
        for attempt in range(1, budget + 1):
            try:
                return erdos_renyi_giant(spec.N, spec.lam, gen)[0]
            except DegenerateSampleError as exc:
                logger.debug(f"[build_graph] attempt {attempt}: {exc}")
        raise ConfigError(f"no usable giant component for N={spec.N}, lam={spec.lam} in {budget} attempts")
    raise ConfigError(f"graph kind {spec.kind!r} is not supported by the experiment")


def separate_deep_traps(env: Environment, M: int, ell: int, rng, max_resamples: int) -> Tuple[Environment, int]:
    """Re-enumerate vertices (keeping the ranked depths) until the top M are separated.

    Returns the environment and the number of re-enumerations.
    """
    gen = as_generator(rng)
    n = env.n_vertices
    ranked_depths = env.depth_of[list(env.ranked_vertices)]
    for attempt in range(max_resamples + 1):
        pair = separation_violation(env.graph, env.deep_traps(M), ell)
        if pair is None:
            return env, attempt
        logger.debug(f"[separate_deep_traps] attempt {attempt}: traps {pair} closer than {2 * ell + 2}")
        if attempt < max_resamples:
            env = env.with_ranking(tuple(gen.permutation(n).tolist()), ranked_depths)
    raise ConfigError(
        f"top {M} traps not {ell}-separated after {max_resamples} re-enumerations; lower M or ell"
    )


@dataclass
class ExperimentSetup:
    cfg: ExperimentConfig
    env: Environment
    limit: LimitWeights
    traps: Tuple[int, ...]
    escape: Dict[int, float]
    beta: float
    c_V: float
    resamples: int
    kparams: KParams
    y_params: Tuple[np.ndarray, np.ndarray]
    summaries: Dict = field(default_factory=dict)

    @property
    def ranks(self) -> List[int]:
        return list(range(1, len(self.traps) + 1))

    def landing_law(self, n: int) -> Distribution:
        """u_j = deg(x_j) v(x_j) over the top n ranks."""
        g = self.env.graph
        return Distribution.from_weights(range(1, n + 1), [g.degree(x) * self.escape[x] for x in self.traps[:n]])


def _escape_values(env: Environment, A: Sequence[int], cfg: ExperimentConfig, rng) -> Dict[int, float]:
    if env.n_vertices <= setting("TRAPLAB_DENSE_LIMIT"):
        return {x: escape_probability_exact(env.graph, x, cfg.ell) for x in A}
    gen = as_generator(rng)
    return {x: escape_probability_mc(env, x, cfg.ell, cfg.escape_samples, gen, cfg.step_budget).value for x in A}


def _bound_certificates(env: Environment, A: Sequence[int], cfg: ExperimentConfig) -> Optional[List[Dict]]:
    """Hitting-law certificates at horizon L t_mix for small graphs; None when too large."""
    g = env.graph
    if g.n_vertices > setting("TRAPLAB_DENSE_LIMIT"):
        return None
    far = int(np.argmax(g.distance_array(A)))
    try:
        t_mix = mixing_time(g)
        found = [
            lemma_s01_certificate(g, A, far, cfg.L, t_mix),
            lemma_s03_certificate(g, A, cfg.ell, cfg.L, t_mix),
        ]
    except SizeError as exc:
        logger.info(f"[_bound_certificates] skipped: {exc}")
        return None
    return [c.to_record() for c in found]


def prepare(cfg: ExperimentConfig) -> ExperimentSetup:
    if cfg.seed is None:
        raise ConfigError("the experiment needs a seed")
    root = RandomSource(cfg.seed)
    graph = build_graph(cfg.graph, root.spawn(GRAPH_STREAM))
    env, limit = coupled_environment(graph, cfg.alpha, root.spawn(ENV_STREAM), cfg.truncation, cfg.seed)
    if cfg.M >= graph.n_vertices:
        raise ConfigError(f"M={cfg.M} needs a graph with more than {cfg.M} vertices")
    env, resamples = separate_deep_traps(env, cfg.M, cfg.ell, root.spawn(ENUM_STREAM), cfg.max_resamples)
    A = env.deep_traps(cfg.M)
    escape = _escape_values(env, A, cfg, root.spawn(ESCAPE_STREAM))

    n = graph.n_vertices
    c_V = normalizer_c(n, cfg.alpha)
    beta = realized_time_scale(cfg.graph.kind, n, cfg.alpha, escape[A[0]], cfg.graph.N, cfg.graph.lam)
    params = {k: v for k, v in cfg.to_dict()["graph"].items() if k != "kind"}
    reference = reference_time_scale(cfg.graph.kind, params, n, cfg.alpha)
    summaries: Dict = {
        "n_vertices": n,
        "n_edges": graph.n_edges,
        "a1_resamples": resamples,
        "beta": beta,
        "beta_reference": reference,
        "c_V": c_V,
        "v_ell_x1": escape[A[0]],
        "escape": [escape[x] for x in A],
        "coupling_discrepancy": coupling_discrepancy(env, limit),
        "shallow_mass": env.shallow_mass(A),
        "certificates": _bound_certificates(env, A, cfg),
    }

    if cfg.graph.kind in TRANSITIVE_KINDS:
        kparams = KParams.from_limit_weights(limit)
    else:
        pairs = estimate_tree_escape(cfg.graph.lam, cfg.tree_depth, limit.truncation, root.spawn(TREE_STREAM))
        kparams = KParams.from_tree_escape(limit, pairs)
        summaries["tree_escape"] = {
            "mean_D": float(np.mean([p[0] for p in pairs])),
            "mean_E": float(np.mean([p[1] for p in pairs])),
        }
    Z, u = y_process_params(env, A, escape)
    logger.info(
        f"[prepare] {cfg.graph.label()}: (A1) separated after {resamples} re-enumerations; "
        f"beta_N={beta:.6g} (reference {reference}), c_V={c_V:.6g}, v_ell(x_1)={escape[A[0]]:.6g}"
    )
    return ExperimentSetup(cfg, env, limit, A, escape, beta, c_V, resamples, kparams, (Z / beta, u), summaries)


# ============================================================
# Replicas
# ============================================================
@dataclass(frozen=True)
class ReplicaResult:
    index: int
    first_landing: Optional[int]
    holds: Dict[int, Tuple[float, ...]]
    excursion_fraction: float
    distances: Dict[str, float]


def trace_path(records: Sequence[CycleRecord], rank_of, beta: float) -> Trajectory:
    """Trace on A as a real step function: 1/rank of the last trap, time / beta."""
    pieces, t = [], 0.0
    for r in records:
        pieces.append((t, t + r.cycle_length / beta, embed_state(rank_of(r.trap))))
        t += r.cycle_length / beta
    return Trajectory.from_segments(pieces)


def _kprocess_trace(p: KParams, y: int, M: int, horizon: float, gen) -> Trajectory:
    """K-process observed on {1..M}, long enough to cover horizon."""
    span = 2.0 * horizon
    while True:
        path = trace_on(sample_kprocess(p, y, span, gen).trajectory, range(1, M + 1))
        if path.horizon >= horizon:
            return path.truncated(horizon).map_states(embed_state)
        span *= 2.0


def _run_replica(setup: ExperimentSetup, r: int) -> ReplicaResult:
    cfg = setup.cfg
    env = setup.env
    gen = RandomSource(cfg.seed).spawn(REPLICA_STREAM_BASE + r).generator
    if cfg.start_mode == "rho":
        law = setup.landing_law(cfg.M)
        start_rank = int(gen.choice(law.support, p=law.mass))
    else:
        start_rank = cfg.start_rank
    x0 = env.vertex_of_rank(start_rank)
    stats = excursion_decomposition(env, setup.traps, cfg.ell, cfg.cycles, x0, gen, cfg.step_budget)

    landing = stats.first_landing(setup.traps[: cfg.n_hit])
    holds = {
        j: tuple((stats.holding_times(setup.traps[j - 1]) / setup.beta).tolist()) for j in range(1, cfg.n_hit + 1)
    }
    excursion = sum(rec.excursion_time for rec in stats.records) / stats.total_time

    distances: Dict[str, float] = {}
    if r < cfg.k_paths:
        trace = trace_path(stats.records, env.rank_of, setup.beta)
        T = min(cfg.horizon, trace.horizon)
        trace = trace.truncated(T)
        k_path = _kprocess_trace(setup.kparams, start_rank, cfg.M, T, gen)
        k_other = _kprocess_trace(setup.kparams, start_rank, cfg.M, T, gen)
        Z, u = setup.y_params
        y_path = finite_chain(Z, u, start_rank, T, gen).map_states(embed_state)
        distances = {
            "trace_vs_kprocess": d_T(trace, k_path),
            "trace_vs_yprocess": d_T(trace, y_path),
            "kprocess_vs_kprocess": d_T(k_path, k_other),
        }
    return ReplicaResult(r, None if landing is None else env.rank_of(landing), holds, excursion, distances)


def _replica_task(args) -> ReplicaResult:
    setup, r = args
    return _run_replica(setup, r)


def run_replicas(setup: ExperimentSetup) -> List[ReplicaResult]:
    cfg = setup.cfg
    tasks = [(setup, r) for r in range(cfg.replicas)]
    if cfg.workers <= 1:
        results = [_replica_task(t) for t in tasks]
    else:
        with multiprocessing.Pool(cfg.workers) as pool:
            results = pool.map(_replica_task, tasks)
    results.sort(key=lambda res: res.index)
    return results


# ============================================================
# Experiment
# ============================================================
def run_convergence_experiment(cfg: ExperimentConfig) -> Report:
    setup = prepare(cfg)
    results = run_replicas(setup)
    report = Report(provenance={"config": cfg.provenance(), "seed": cfg.seed})
    report.summaries.update(setup.summaries)

    n = cfg.n_hit
    landings = [res.first_landing for res in results if res.first_landing is not None]
    if len(landings) < 30:
        raise ConfigError(
            f"only {len(landings)} replicas landed in the top {n} traps; raise replicas or cycles"
        )
    counts = [landings.count(j) for j in range(1, n + 1)]
    expected = setup.landing_law(n).mass
    report.add(TestRecord.from_fit(f"hitting_law_top{n}", chi_square(counts, expected), cfg.significance))

    for j in range(1, n + 1):
        pooled = [h for res in results for h in res.holds[j]]
        if len(pooled) < 30:
            raise ConfigError(f"only {len(pooled)} holding times at rank {j}; raise replicas or cycles")
        x = setup.traps[j - 1]
        mean = setup.env.depth_of[x] / (setup.beta * setup.escape[x])
        report.add(TestRecord.from_fit(f"holding_time_rank{j}", ks_exponential(pooled, mean), cfg.significance))

    report.summaries["landings"] = {"counts": counts, "missing": len(results) - len(landings)}
    report.summaries["excursion_fraction"] = summarize([res.excursion_fraction for res in results])
    report.summaries["shallow_time_budget"] = shallow_time_budget(
        setup.summaries["shallow_mass"], cfg.cycles, setup.beta
    )
    for key in ("trace_vs_kprocess", "trace_vs_yprocess", "kprocess_vs_kprocess"):
        report.summaries[f"d_T_{key}"] = summarize([res.distances[key] for res in results if res.distances])

    logger.info(
        f"[run_convergence_experiment] {cfg.graph.label()} seed={cfg.seed}: "
        f"{len(report.tests) - len(report.failures)}/{len(report.tests)} tests passed"
    )
    return report
