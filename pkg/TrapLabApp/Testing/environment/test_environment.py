"""
Test suite for the environment app: Pareto depths, limit weights, the coupled environment and the environment file.
"""

import json
import math

import numpy as np
import pytest
from scipy import stats

from apps.core.exceptions import InputError
from apps.core.random_source import RandomSource
from apps.environment import (
    Environment,
    LimitWeights,
    assign_weights,
    coupled_environment,
    coupling_discrepancy,
    load_environment,
    normalizer_c,
    sample_limit_weights,
    sample_pareto_weights,
    save_environment,
)
from apps.graphs import Graph, torus


@pytest.fixture
def path4():
    """Path 0-1-2-3."""
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def path_env(path4):
    """Depths 1, 5, 2, 5 on the path; vertex 1 outranks vertex 3 on the tie."""
    return Environment.from_depths(path4, [1.0, 5.0, 2.0, 5.0], alpha=0.5, seed=3)


@pytest.fixture
def coupled():
    """Coupled environment on torus(11, 2) with alpha = 0.5."""
    return coupled_environment(torus(11, 2), 0.5, RandomSource(21))


# =========================================================
# PARETO DEPTHS
# =========================================================

class TestParetoWeights:
    """Tests for the heavy-tailed depth law."""

    def test_support_and_law(self):
        """Depths are at least 1 and follow P[W > t] = t^-alpha."""
        w = sample_pareto_weights(20_000, 0.5, RandomSource(1))
        assert w.min() >= 1.0
        assert stats.kstest(w, stats.pareto(b=0.5).cdf).pvalue > 0.001

    def test_alpha_range(self):
        """alpha must lie in (0, 1)."""
        for alpha in (0.0, 1.0, 1.5):
            with pytest.raises(InputError):
                sample_pareto_weights(10, alpha, RandomSource(0))

    def test_normalizer(self):
        """c_k = k^(-1/alpha)."""
        assert math.isclose(normalizer_c(100, 0.5), 1e-4)
        with pytest.raises(InputError):
            normalizer_c(0, 0.5)


# =========================================================
# LIMIT WEIGHTS
# =========================================================

class TestLimitWeights:
    """Tests for the Poisson limit weights."""

    def test_strictly_decreasing(self):
        """Sampled weights decrease strictly."""
        lw = sample_limit_weights(50, 0.6, RandomSource(2))
        assert lw.truncation == 50
        assert np.all(np.diff(lw.as_array()) < 0)

    def test_rejects_non_decreasing(self):
        """Ties or increases are invalid."""
        with pytest.raises(InputError):
            LimitWeights((2.0, 2.0), 0.5)

    def test_tail_bound(self):
        """J^(1 - 1/alpha) / (1/alpha - 1)."""
        lw = LimitWeights(tuple(float(64 - j) for j in range(64)), 0.5)
        assert math.isclose(lw.tail_bound, 1.0 / 64.0)

    def test_largest_weight_is_frechet(self):
        """w_1 has CDF exp(-t^-alpha)."""
        gen = RandomSource(3).generator
        w1 = [sample_limit_weights(1, 0.5, gen).weights[0] for _ in range(5000)]
        assert stats.kstest(w1, stats.invweibull(0.5).cdf).pvalue > 0.001

    def test_truncation_positive(self):
        """J must be at least 1."""
        with pytest.raises(InputError):
            sample_limit_weights(0, 0.5, RandomSource(0))


# =========================================================
# ENVIRONMENT
# =========================================================

class TestEnvironment:
    """Tests for ranks and measures."""

    def test_ranking_breaks_ties_by_id(self, path_env):
        """from_depths ranks by depth, then vertex id."""
        assert path_env.ranked_vertices == (1, 3, 2, 0)
        assert path_env.rank_of(3) == 2
        assert path_env.vertex_of_rank(1) == 1
        assert path_env.psi.tolist() == [4, 1, 3, 2]

    def test_deep_traps(self, path_env):
        """A = top M ranks."""
        assert path_env.deep_traps(2) == (1, 3)
        with pytest.raises(InputError):
            path_env.deep_traps(5)

    def test_nu_is_degree_times_depth(self, path_env):
        """nu(x) proportional to deg(x) W_x."""
        assert path_env.weights.tolist() == [1.0, 10.0, 4.0, 5.0]
        assert path_env.normalizer == 20.0
        assert math.isclose(path_env.nu_mass(range(4)), 1.0)
        assert math.isclose(path_env.shallow_mass([1]), 0.5)

    def test_with_ranking(self, path_env):
        """Re-enumeration moves the ranked depths to new vertices."""
        moved = path_env.with_ranking((0, 2, 1, 3), [5.0, 5.0, 2.0, 1.0])
        assert moved.depth_of.tolist() == [5.0, 2.0, 5.0, 1.0]
        assert moved.deep_traps(1) == (0,)

    def test_validation(self, path4):
        """Depths must be positive and the ranking consistent."""
        with pytest.raises(InputError):
            Environment(path4, [1.0, 0.0, 1.0, 1.0], (0, 1, 2, 3))
        with pytest.raises(InputError):
            Environment(path4, [1.0, 2.0, 1.0, 1.0], (0, 1, 2, 3))
        with pytest.raises(InputError):
            Environment(path4, [1.0, 1.0, 1.0, 1.0], (0, 1, 2, 2))
        with pytest.raises(InputError):
            Environment(path4, [1.0, 1.0], (0, 1))

    def test_depths_read_only(self, path_env):
        """Depth arrays cannot be mutated."""
        with pytest.raises(ValueError):
            path_env.depth_of[0] = 9.0

    def test_assign_weights(self, path4):
        """Given depths land on a permutation, ranked in decreasing order."""
        env = assign_weights(path4, [3.0, 1.0, 4.0, 2.0], RandomSource(5), alpha=0.5)
        assert sorted(env.depth_of.tolist()) == [1.0, 2.0, 3.0, 4.0]
        assert env.depth_of[list(env.ranked_vertices)].tolist() == [4.0, 3.0, 2.0, 1.0]
        with pytest.raises(InputError):
            assign_weights(path4, [1.0, 2.0], RandomSource(5))

    def test_top_rank_is_uniform_under_equal_depths(self, path4):
        """With all depths equal the enumeration alone picks rank 1: each vertex about a quarter of the time."""
        gen = RandomSource(6).generator
        n = 8000
        tops = [assign_weights(path4, [1.0] * 4, gen).vertex_of_rank(1) for _ in range(n)]
        freq = np.bincount(tops, minlength=4) / n
        assert np.all(np.abs(freq - 0.25) < 0.02)


class TestCoupledEnvironment:
    """Tests for the coupling of finite depths and limit weights."""

    def test_ranked_depths_decrease(self, coupled):
        """Depths along the ranking decrease and exceed 1."""
        env, _ = coupled
        ranked = env.depth_of[list(env.ranked_vertices)]
        assert np.all(np.diff(ranked) <= 0)
        assert ranked.min() > 1.0

    def test_limit_truncation(self, coupled):
        """Limit weights have the configured truncation."""
        _, limit = coupled
        assert limit.truncation == 64
        assert limit.alpha == 0.5

    def test_shared_exponentials(self):
        """c_n W_(j) and w_j come from the same Gamma_j."""
        g = torus(31, 2)
        env, limit = coupled_environment(g, 0.5, RandomSource(8))
        ranked = env.depth_of[list(env.ranked_vertices)]
        scaled = normalizer_c(g.n_vertices, 0.5) * ranked[:5]
        # (Gamma_j / Gamma_{n+1} * n)^-2 vs Gamma_j^-2; Gamma_{n+1} / n is near 1
        assert np.allclose(scaled, limit.as_array()[:5], rtol=0.2)

    def test_reproducible(self):
        """Same seed, same environment."""
        a, _ = coupled_environment(torus(9, 2), 0.5, RandomSource(4))
        b, _ = coupled_environment(torus(9, 2), 0.5, RandomSource(4))
        assert np.array_equal(a.depth_of, b.depth_of)
        assert a.ranked_vertices == b.ranked_vertices

    def test_discrepancy_shrinks_with_size(self):
        """On common seeds the discrepancy at 10000 vertices is below that at 100 for most seeds."""
        small, large = torus(100, 1), torus(10_000, 1)
        smaller = 0
        for s in range(20):
            d_small = coupling_discrepancy(*coupled_environment(small, 0.5, RandomSource(s)))
            d_large = coupling_discrepancy(*coupled_environment(large, 0.5, RandomSource(s)))
            smaller += d_large < d_small
        assert smaller >= 15


# =========================================================
# ENVIRONMENT FILE
# =========================================================

class TestEnvironmentFile:
    """Tests for the environment JSON file."""

    def test_save_and_load(self, tmp_path, path_env, path4):
        """A saved environment loads back onto the same graph."""
        path = tmp_path / "env.json"
        save_environment(path_env, path)
        back = load_environment(path, path4)
        assert back.depth_of.tolist() == path_env.depth_of.tolist()
        assert back.ranked_vertices == path_env.ranked_vertices
        assert back.alpha == 0.5 and back.seed == 3

    def test_invalid_file(self, tmp_path, path4):
        """A ranking that is not a permutation is rejected."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"depths": [1, 2, 3, 4], "ranked": [0, 0, 1, 2]}))
        with pytest.raises(InputError):
            load_environment(path, path4)

    def test_negative_depth_file(self, tmp_path, path4):
        """Non-positive depths are rejected."""
        path = tmp_path / "neg.json"
        path.write_text(json.dumps({"depths": [1, -2, 3, 4], "ranked": [3, 2, 0, 1]}))
        with pytest.raises(InputError):
            load_environment(path, path4)
