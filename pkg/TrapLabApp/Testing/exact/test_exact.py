"""
Test suite for the exact app: harmonic solves, escape probabilities, capacity, trace stationary state,
occupation identities, mixing times and the hitting-distribution certificates.
"""

import json
import math

import networkx as nx
import numpy as np
import pytest

from apps.core.exceptions import DomainError, InputError, PreconditionError, SizeError
from apps.environment import Environment
from apps.exact import (
    Distribution,
    capacity,
    dirichlet_form,
    equilibrium_hit,
    equilibrium_potential,
    escape_probability_exact,
    expected_occupation,
    finite_horizon_hit,
    gamma_ell,
    harmonic_measure,
    hit_distribution_exact,
    kappa,
    lazy_transition,
    lemma_s01_certificate,
    lemma_s01_local_certificate,
    lemma_s03_certificate,
    mean_cycle_length_exact,
    mean_cycle_occupation,
    mixing_time,
    occupation_identity,
    return_hit_distribution,
    rho_exact,
    rho_forms,
    stationary_nu,
    stationary_pi,
    tree_escape_probability,
    tv_profile,
    write_certificates,
)
from apps.exact.solvers import laplacian, solve_dirichlet
from apps.graphs import Graph, regular_tree, torus, torus_vertex
from apps.harness.time_scales import regular_tree_escape


@pytest.fixture
def cycle6():
    """Cycle on six vertices."""
    return Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])


@pytest.fixture
def path5():
    """Path 0-1-2-3-4."""
    return Graph.from_edges(5, [(i, i + 1) for i in range(4)])


@pytest.fixture
def small_world():
    """Connected Watts-Strogatz graph on 20 vertices, as a Graph and as networkx."""
    nxg = nx.connected_watts_strogatz_graph(20, 4, 0.3, seed=1)
    return Graph.from_edges(20, list(nxg.edges())), nxg


@pytest.fixture
def trap_env():
    """torus(9, 2) with traps of depth 50 and 40 at opposite corners, depth 1 elsewhere."""
    g = torus(9, 2)
    depths = np.ones(g.n_vertices)
    depths[0], depths[torus_vertex((4, 4), 9)] = 50.0, 40.0
    return Environment.from_depths(g, depths)


@pytest.fixture
def random_env(small_world):
    """Random depths on the Watts-Strogatz graph."""
    g, _ = small_world
    return Environment.from_depths(g, np.random.default_rng(3).uniform(1.0, 30.0, 20))


def dense_potential(nxg, A, B):
    """P_x[H_A < H_B] by a dense linear solve on the networkx graph."""
    n = nxg.number_of_nodes()
    P = nx.to_numpy_array(nxg, nodelist=range(n))
    P /= P.sum(axis=1, keepdims=True)
    M = np.eye(n) - P
    b = np.zeros(n)
    for x in list(A) + list(B):
        M[x] = 0.0
        M[x, x] = 1.0
        b[x] = 1.0 if x in A else 0.0
    return np.linalg.solve(M, b)


# =========================================================
# DISTRIBUTIONS
# =========================================================

class TestDistribution:
    """Tests for finite probability vectors."""

    def test_from_weights(self):
        """Weights are normalized; missing points have mass 0."""
        d = Distribution.from_weights((3, 7), [1.0, 3.0])
        assert d[7] == 0.75
        assert d[5] == 0.0
        assert d.aligned([7, 3]).tolist() == [0.75, 0.25]

    def test_validation(self):
        """Mass must be nonnegative, sum to 1 and sit on distinct points."""
        with pytest.raises(InputError):
            Distribution((1, 2), np.array([0.5, 0.6]))
        with pytest.raises(InputError):
            Distribution((1, 1), np.array([0.5, 0.5]))
        with pytest.raises(InputError):
            Distribution.from_weights((1,), [0.0])

    def test_distances(self):
        """Total variation is half the l1 distance."""
        a = Distribution.from_weights((0, 1), [1.0, 1.0])
        b = Distribution.point_mass(0)
        assert math.isclose(a.total_variation(b), 0.5)
        assert math.isclose(a.l1(b), 1.0)


# =========================================================
# HARMONIC SOLVES
# =========================================================

class TestHarmonic:
    """Tests for hitting distributions and potentials."""

    def test_gambler_ruin(self, path5):
        """From 1 on the 5-path, {0, 4} is hit at 0 w.p. 3/4."""
        order, H = harmonic_measure(path5, [4, 0])
        assert order == (0, 4)
        assert np.allclose(H[1], [0.75, 0.25])
        assert np.allclose(H[0], [1.0, 0.0])

    def test_harmonic_at_interior(self, small_world):
        """Interior rows of H average their neighbours' rows; rows on A are the identity."""
        g, _ = small_world
        order, H = harmonic_measure(g, [3, 11, 18])
        interior = [z for z in range(g.n_vertices) if z not in order]
        means = np.array([H[list(g.neighbors(z))].mean(axis=0) for z in interior])
        assert np.abs(H[interior] - means).max() < 1e-10
        assert np.allclose(H[list(order)], np.eye(3))
        assert np.allclose(H.sum(axis=1), 1.0)

    def test_dirichlet_residual_dense_and_iterative(self, small_world, settings):
        """Random boundary data leave no Laplacian residual inside, for the dense and the CG solve."""
        g, _ = small_world
        boundary = [0, 7, 13]
        interior = [z for z in range(g.n_vertices) if z not in boundary]
        values = np.random.default_rng(0).normal(size=(3, 2))
        L = laplacian(g)
        dense = solve_dirichlet(g, boundary, values)
        settings.TRAPLAB_DENSE_LIMIT = 5
        iterative = solve_dirichlet(g, boundary, values)
        for h in (dense, iterative):
            assert np.abs((L @ h)[interior]).max() < 1e-8
            assert np.allclose(h[boundary], values)
        assert np.allclose(dense, iterative, atol=1e-8)

    def test_hit_from_inside(self, path5):
        """H_A >= 0, so a start in A is a point mass."""
        assert hit_distribution_exact(path5, 4, [0, 4]).as_dict() == {4: 1.0}

    def test_return_hit(self, path5):
        """From 2 the forced step goes to 1 or 3, each side reached w.p. 1/2."""
        law = return_hit_distribution(path5, 2, [0, 4])
        assert math.isclose(law[0], 0.5)

    def test_potential_against_dense_solve(self, small_world):
        """Sparse potentials agree with a dense networkx-built solve."""
        g, nxg = small_world
        A, B = [0, 5], [10, 15, 19]
        assert np.allclose(equilibrium_potential(g, A, B), dense_potential(nxg, A, B), atol=1e-10)

    def test_stationary_measures(self, small_world, random_env):
        """pi is proportional to degree; nu to degree times depth."""
        g, nxg = small_world
        degrees = np.array([nxg.degree(x) for x in range(20)], dtype=float)
        assert np.allclose(stationary_pi(g).mass, degrees / degrees.sum())
        assert np.allclose(stationary_nu(random_env).mass, random_env.weights / random_env.normalizer)

    def test_equilibrium_hit_is_distribution(self, small_world):
        """p(., A) sums to one over A."""
        g, _ = small_world
        law = equilibrium_hit(g, [2, 9, 17])
        assert math.isclose(sum(law.as_dict().values()), 1.0)


# =========================================================
# ESCAPE PROBABILITIES
# =========================================================

class TestEscapeExact:
    """Tests for v_ell(x)."""

    def test_cycle(self, cycle6):
        """On the 6-cycle: 1/2 beyond distance 1, 1/3 beyond distance 2."""
        assert math.isclose(escape_probability_exact(cycle6, 0, 1), 0.5)
        assert math.isclose(escape_probability_exact(cycle6, 0, 2), 1.0 / 3.0)

    def test_zero_radius(self, cycle6):
        """Every first step leaves ball(x, 0)."""
        assert math.isclose(escape_probability_exact(cycle6, 0, 0), 1.0)

    def test_ball_covers_graph(self, cycle6):
        """No exterior, no escape."""
        with pytest.raises(DomainError):
            escape_probability_exact(cycle6, 0, 3)

    def test_torus_decreasing_in_radius(self, trap_env):
        """Escape is certain at radius 0 and shrinks as the radius grows."""
        assert math.isclose(escape_probability_exact(trap_env.graph, 0, 0), 1.0)
        assert 0.0 < escape_probability_exact(trap_env.graph, 0, 2) < escape_probability_exact(trap_env.graph, 0, 1)

    def test_regular_tree_formula(self):
        """Root of a 3-regular tree with ell = 5: (1/2) / (1 - 2^-6)."""
        value = escape_probability_exact(regular_tree(3, 8).as_graph(), 0, 5)
        assert math.isclose(value, 0.5 / (1.0 - 2.0**-6), rel_tol=1e-10)
        assert math.isclose(value, regular_tree_escape(3, 5), rel_tol=1e-10)

    def test_tree_reduction_matches_solve(self):
        """Series/parallel reduction agrees with the linear solve."""
        tree = regular_tree(3, 6)
        by_reduction = tree_escape_probability(tree, 6)
        by_solve = escape_probability_exact(tree.as_graph(), 0, 5)
        assert math.isclose(by_reduction, by_solve, rel_tol=1e-10)
        assert math.isclose(by_reduction, regular_tree_escape(3, 5), rel_tol=1e-10)

    def test_tree_depth_checks(self):
        """Depth must be at least 1 and present in the tree."""
        tree = regular_tree(3, 3)
        with pytest.raises(InputError):
            tree_escape_probability(tree, 0)
        with pytest.raises(DomainError):
            tree_escape_probability(tree, 4)

    def test_gamma(self, cycle6):
        """Gamma sums deg(x) v(x)."""
        assert math.isclose(gamma_ell(cycle6, [0, 3], 0), 4.0)


# =========================================================
# CAPACITY AND TRACE STATIONARY STATE
# =========================================================

class TestCapacity:
    """Tests for the two capacity evaluations."""

    def test_forms_agree(self, random_env):
        """Dirichlet form and boundary flux give the same capacity."""
        pair = capacity(random_env, [0, 1], [12, 18])
        assert pair.relative_gap < 1e-10
        assert pair.dirichlet > 0

    def test_symmetric(self, random_env):
        """Cap(A, B) = Cap(B, A)."""
        a = capacity(random_env, [0, 1], [12, 18]).dirichlet
        b = capacity(random_env, [12, 18], [0, 1]).dirichlet
        assert math.isclose(a, b, rel_tol=1e-10)

    def test_disjoint_sets(self, random_env):
        """Overlapping sets are rejected."""
        with pytest.raises(InputError):
            capacity(random_env, [0, 1], [1, 2])

    def test_constant_has_zero_energy(self, random_env):
        """Constants have zero Dirichlet energy."""
        assert dirichlet_form(random_env, np.ones(20)) == 0.0


class TestRho:
    """Tests for the trace chain's stationary law."""

    def test_forms_agree(self, trap_env):
        """deg v and nu v / W give the same normalized law."""
        A = trap_env.deep_traps(2)
        by_degree, by_nu = rho_forms(trap_env, A, 1)
        assert np.allclose(by_degree, by_nu, atol=1e-12)

    def test_transitive_graph_is_uniform(self, trap_env):
        """On a torus every trap has the same degree and escape, so rho is uniform."""
        rho = rho_exact(trap_env, trap_env.deep_traps(2), 1)
        assert np.allclose(rho.mass, [0.5, 0.5])

    def test_separation_required(self, trap_env):
        """Traps at distance 8 are too close for ell = 4."""
        with pytest.raises(PreconditionError):
            rho_exact(trap_env, trap_env.deep_traps(2), 4)


# =========================================================
# OCCUPATION
# =========================================================

class TestOccupation:
    """Tests for occupation over one trace cycle."""

    def test_identity_for_constant(self, trap_env):
        """With g = 1 both sides are 1 times the cycle normalization."""
        lhs, rhs = occupation_identity(trap_env, trap_env.deep_traps(2), 1, lambda x: 1.0)
        assert math.isclose(lhs, rhs, rel_tol=1e-9)

    def test_identity_for_random_function(self, trap_env):
        """The identity holds for an arbitrary vertex function."""
        g = np.random.default_rng(11).normal(size=trap_env.n_vertices)
        lhs, rhs = occupation_identity(trap_env, trap_env.deep_traps(2), 1, g)
        assert math.isclose(lhs, rhs, rel_tol=1e-9, abs_tol=1e-12)

    def test_cycle_occupation_factorizes(self, trap_env):
        """E_rho[int g] = E_nu[g] E_rho[D_1]."""
        A = trap_env.deep_traps(2)
        g = np.random.default_rng(12).uniform(size=trap_env.n_vertices)
        e_nu = float(g @ stationary_nu(trap_env).mass)
        expected = e_nu * mean_cycle_length_exact(trap_env, A, 1)
        assert math.isclose(mean_cycle_occupation(trap_env, A, 1, g), expected, rel_tol=1e-9)

    def test_occupation_at_start_exceeds_hold(self, trap_env):
        """Occupation of {x} from x is at least the mean time at x."""
        A = trap_env.deep_traps(2)
        x = A[0]
        at_x = expected_occupation(trap_env, x, A, 1, {x: 1.0})
        assert at_x >= trap_env.depth_of[x] - 1e-9

    def test_start_must_be_trap(self, trap_env):
        """x outside A is rejected."""
        with pytest.raises(InputError):
            expected_occupation(trap_env, 1, trap_env.deep_traps(2), 1, lambda x: 1.0)

    def test_vertex_function_length(self, trap_env):
        """Array functions need one value per vertex."""
        with pytest.raises(InputError):
            occupation_identity(trap_env, trap_env.deep_traps(2), 1, [1.0, 2.0])


# =========================================================
# MIXING
# =========================================================

class TestMixing:
    """Tests for the lazy chain and its mixing time."""

    def test_lazy_rows(self, cycle6):
        """Rows sum to one with holding probability 1/2."""
        P = lazy_transition(cycle6)
        assert np.allclose(P.sum(axis=1), 1.0)
        assert np.allclose(np.diag(P), 0.5)

    def test_mixing_time_matches_profile(self, small_world):
        """The binary search finds the first step where the TV profile is at most 1/4."""
        g, _ = small_world
        t = mixing_time(g)
        profile = tv_profile(g, t)
        assert profile[t - 1] <= 0.25
        assert t == 1 or profile[t - 2] > 0.25

    def test_torus_mixing(self):
        """torus(9, 2) mixes slower than torus(5, 2)."""
        assert mixing_time(torus(9, 2)) > mixing_time(torus(5, 2))

    def test_dense_limit(self, settings):
        """Graphs above the dense limit are refused."""
        settings.TRAPLAB_DENSE_LIMIT = 10
        with pytest.raises(SizeError):
            mixing_time(torus(5, 2))

    def test_finite_horizon(self, path5):
        """H_A <= 0 only inside A; probabilities grow with the horizon."""
        assert finite_horizon_hit(path5, [0], 0, strict=False).tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]
        assert finite_horizon_hit(path5, [0], 0, strict=True).tolist() == [0.0] * 5
        short = finite_horizon_hit(path5, [0], 5)
        long = finite_horizon_hit(path5, [0], 500)
        assert np.all(long >= short)
        assert long[4] > 0.99

    def test_negative_horizon(self, path5):
        """Horizons are nonnegative."""
        with pytest.raises(InputError):
            finite_horizon_hit(path5, [0], -1)


# =========================================================
# CERTIFICATES
# =========================================================

class TestCertificates:
    """Tests for exact bound certificates on a small torus."""

    def test_global_hitting_bound(self, trap_env):
        """The hitting law from far away is within the mixing bound of p(., A)."""
        A = trap_env.deep_traps(2)
        cert = lemma_s01_certificate(trap_env, A, torus_vertex((2, 2), 9), 4)
        assert cert.passed
        assert cert.lhs >= 0

    def test_local_bound(self, trap_env):
        """Return from a trap to the other trap."""
        A = trap_env.deep_traps(2)
        assert lemma_s01_local_certificate(trap_env, A, 0, 1, 4).passed

    def test_equilibrium_bound(self, trap_env):
        """p(x, A) against deg v / Gamma."""
        cert = lemma_s03_certificate(trap_env, trap_env.deep_traps(2), 1, 4)
        assert cert.passed
        assert cert.to_record()["pass"] is True

    def test_start_outside_traps(self, trap_env):
        """z in A is rejected."""
        with pytest.raises(InputError):
            lemma_s01_certificate(trap_env, trap_env.deep_traps(2), 0, 4)

    def test_kappa_is_probability(self, trap_env):
        """kappa lies in [0, 1]."""
        value = kappa(trap_env, trap_env.deep_traps(2), 1, 2)
        assert 0.0 <= value <= 1.0

    def test_write(self, tmp_path, trap_env):
        """Certificates export as {instance, lhs, rhs, pass} records."""
        cert = lemma_s03_certificate(trap_env, trap_env.deep_traps(2), 1, 4)
        path = tmp_path / "certificates.json"
        write_certificates([cert], path)
        records = json.loads(path.read_text())
        assert set(records[0]) == {"instance", "lhs", "rhs", "pass"}
