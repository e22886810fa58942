"""
Test suite for the metric app: canonical representatives, d_T, the completed-graph Hausdorff distance and
the jump-set modulus.
"""

import math

import numpy as np
import pytest
from scipy.spatial.distance import directed_hausdorff

from apps.core.exceptions import InputError
from apps.core.random_source import RandomSource
from apps.core.trajectory import step_function
from apps.harness.verify import d_T_brute_force, random_step_function
from apps.metric import canonical, completed_graph, d_T, d_T2, modulus


def sampled_graph(f, spacing=1e-3):
    """Points along every piece of the completed graph, at most `spacing` apart."""
    points = []
    for x0, x1, y0, y1 in completed_graph(f):
        n = max(2, int(math.ceil(max(x1 - x0, y1 - y0) / spacing)) + 1)
        points.append(np.column_stack((np.linspace(x0, x1, n), np.linspace(y0, y1, n))))
    return np.vstack(points)


def sampled_hausdorff(f, g):
    a, b = sampled_graph(f), sampled_graph(g)
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


# =========================================================
# CANONICAL FORM
# =========================================================

class TestCanonical:
    """Tests for the minimal representative."""

    def test_merges_equal_neighbours(self):
        """Equal adjacent values collapse into one segment."""
        h = canonical(step_function([0.0, 0.3, 0.6, 1.0], [1.0, 1.0, 2.0]))
        assert h.states.tolist() == [1.0, 2.0]
        assert h.jump_times.tolist() == [0.6]

    def test_completed_graph_pieces(self):
        """Two horizontal pieces joined by one vertical piece."""
        pieces = completed_graph(step_function([0.0, 0.5, 1.0], [2.0, 0.0]))
        assert pieces == [(0.0, 0.5, 2.0, 2.0), (0.5, 1.0, 0.0, 0.0), (0.5, 0.5, 0.0, 2.0)]


# =========================================================
# SKOROKHOD-TYPE DISTANCE
# =========================================================

class TestDT:
    """Tests for d_T."""

    def test_short_spike(self):
        """A spike of height 4 on a tenth of the interval costs 0.1."""
        f = step_function([0.0, 1.0], [1.0])
        g = step_function([0.0, 0.9, 1.0], [1.0, 5.0])
        assert math.isclose(d_T(f, g), 0.1)

    def test_threshold_choice(self):
        """Small gap everywhere plus a tall narrow spike: 0.05 + 0.1."""
        f = step_function([0.0, 1.0], [0.0])
        g = step_function([0.0, 0.5, 0.6, 1.0], [0.05, 2.0, 0.0])
        assert math.isclose(d_T(f, g), 0.15)

    def test_identity_and_symmetry(self):
        """d_T(f, f) = 0 and d_T(f, g) = d_T(g, f)."""
        gen = RandomSource(1).generator
        f, g = random_step_function(gen, 5), random_step_function(gen, 5)
        assert d_T(f, f) == 0.0
        assert math.isclose(d_T(f, g), d_T(g, f))

    def test_matches_brute_force(self):
        """Threshold enumeration agrees with enumerating every subset of elementary intervals."""
        gen = RandomSource(2).generator
        for _ in range(200):
            f, g = random_step_function(gen, 4), random_step_function(gen, 4)
            assert abs(d_T(f, g) - d_T_brute_force(f, g)) < 1e-12

    def test_zero_exactly_on_equal_canonical_forms(self):
        """d_T vanishes when the minimal representatives agree and is positive otherwise."""
        f = step_function([0.0, 0.3, 0.6, 1.0], [1.0, 1.0, 2.0])
        g = step_function([0.0, 0.6, 1.0], [1.0, 2.0])
        assert canonical(f) == canonical(g)
        assert d_T(f, g) == 0.0
        gen = RandomSource(4).generator
        for _ in range(200):
            f, g = random_step_function(gen, 10), random_step_function(gen, 10)
            assert (d_T(f, g) == 0.0) == (canonical(f) == canonical(g))

    def test_matches_brute_force_with_ten_pieces(self):
        """The oracle agreement holds for functions with up to ten pieces."""
        gen = RandomSource(5).generator
        for _ in range(20):
            f, g = random_step_function(gen, 10), random_step_function(gen, 10)
            assert abs(d_T(f, g) - d_T_brute_force(f, g)) < 1e-12

    def test_triangle_inequality(self):
        """d_T(f, h) <= d_T(f, g) + d_T(g, h)."""
        gen = RandomSource(3).generator
        for _ in range(300):
            f, g, h = (random_step_function(gen, 5) for _ in range(3))
            assert d_T(f, h) <= d_T(f, g) + d_T(g, h) + 1e-12

    def test_bounded_by_horizon(self):
        """Taking A = [0, T] bounds d_T by T."""
        f = step_function([0.0, 2.0], [0.0])
        g = step_function([0.0, 2.0], [100.0])
        assert d_T(f, g) == 2.0

    def test_horizon_mismatch(self):
        """Functions on different intervals are not comparable."""
        with pytest.raises(InputError):
            d_T(step_function([0.0, 1.0], [0.0]), step_function([0.0, 2.0], [0.0]))


# =========================================================
# COMPLETED-GRAPH DISTANCE
# =========================================================

class TestDT2:
    """Tests for the Hausdorff distance of completed graphs."""

    def test_shifted_jump(self):
        """Moving a unit jump by delta moves the graph by delta."""
        f = step_function([0.0, 0.5, 1.0], [0.0, 1.0])
        g = step_function([0.0, 0.55, 1.0], [0.0, 1.0])
        assert math.isclose(d_T2(f, g), 0.05, rel_tol=1e-9)

    def test_constant_functions(self):
        """Constants at heights a and b are |a - b| apart."""
        assert math.isclose(d_T2(step_function([0.0, 1.0], [1.0]), step_function([0.0, 1.0], [3.5])), 2.5)

    def test_against_point_sampling(self):
        """Exact enumeration agrees with a dense point-sampled Hausdorff distance."""
        gen = RandomSource(4).generator
        for _ in range(20):
            f, g = random_step_function(gen, 4), random_step_function(gen, 4)
            assert abs(d_T2(f, g) - sampled_hausdorff(f, g)) < 2e-3

    def test_inclusion_in_d_T_ball(self):
        """d_T(f, g) <= d_T2(f, g) + modulus(f, 2 d_T2(f, g))."""
        gen = RandomSource(5).generator
        for _ in range(300):
            f, g = random_step_function(gen, 5), random_step_function(gen, 5)
            delta = d_T2(f, g)
            bound = delta + modulus(f, 2.0 * delta) if delta > 0 else 0.0
            assert d_T(f, g) <= bound + 1e-12


# =========================================================
# MODULUS
# =========================================================

class TestModulus:
    """Tests for the jump-set modulus."""

    def test_single_jump(self):
        """An interior jump covers 2 delta."""
        assert math.isclose(modulus(step_function([0.0, 0.5, 1.0], [0.0, 1.0]), 0.1), 0.2)

    def test_clipped_at_zero(self):
        """Neighbourhoods are cut to [0, T]."""
        assert math.isclose(modulus(step_function([0.0, 0.05, 1.0], [0.0, 1.0]), 0.1), 0.15)

    def test_overlapping_jumps(self):
        """Overlaps are counted once."""
        f = step_function([0.0, 0.5, 0.55, 1.0], [0.0, 1.0, 2.0])
        assert math.isclose(modulus(f, 0.1), 0.25)

    def test_no_jumps(self):
        """Constants have modulus 0, and merged neighbours add no jump."""
        assert modulus(step_function([0.0, 0.4, 1.0], [1.0, 1.0]), 0.1) == 0.0

    def test_delta_positive(self):
        """delta must be positive."""
        with pytest.raises(InputError):
            modulus(step_function([0.0, 1.0], [0.0]), 0.0)
