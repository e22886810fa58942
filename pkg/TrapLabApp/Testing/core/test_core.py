"""
Test suite for the core app: error hierarchy, settings access, random streams and trajectories.
"""

import math

import numpy as np
import pytest

from apps.core.conf import DEFAULTS, setting
from apps.core.exceptions import (
    DegenerateSampleError,
    GraphValidationError,
    InputError,
    PreconditionError,
    SamplingError,
    TrapLabError,
)
from apps.core.random_source import BufferedDraws, RandomSource, as_generator
from apps.core.trajectory import Trajectory, step_function


@pytest.fixture
def three_piece():
    """0 on [0, 0.2), 2 on [0.2, 0.5), 1 on [0.5, 1]."""
    return step_function([0.0, 0.2, 0.5, 1.0], [0.0, 2.0, 1.0])


# =========================================================
# EXCEPTIONS AND SETTINGS
# =========================================================

class TestExceptions:
    """Tests for the TrapLabError hierarchy."""

    def test_subclasses_share_base(self):
        """Every project error is a TrapLabError."""
        for cls in (DegenerateSampleError, GraphValidationError, InputError, PreconditionError):
            assert issubclass(cls, TrapLabError)

    def test_degenerate_is_sampling_error(self):
        """Degenerate samples are caught as sampling errors."""
        assert issubclass(DegenerateSampleError, SamplingError)

    def test_input_error_is_value_error(self):
        """Validation failures also read as ValueError."""
        with pytest.raises(ValueError):
            raise InputError("bad")

    def test_precondition_carries_pair(self):
        """The offending vertex pair travels with the error."""
        exc = PreconditionError("too close", pair=(3, 7))
        assert exc.pair == (3, 7)
        assert "too close" in str(exc)


class TestSetting:
    """Tests for the settings accessor."""

    def test_known_setting(self):
        """Project settings resolve to typed values."""
        assert isinstance(setting("TRAPLAB_RETRY_BUDGET"), int)
        assert 0 < setting("TRAPLAB_SIGNIFICANCE") <= 0.1

    def test_unknown_setting_falls_back(self):
        """Names missing from settings return the given default."""
        assert setting("TRAPLAB_DOES_NOT_EXIST", 17) == 17

    def test_defaults_cover_budgets(self):
        """Every budget has a built-in default for library use."""
        for name in ("TRAPLAB_RETRY_BUDGET", "TRAPLAB_STEP_BUDGET", "TRAPLAB_DENSE_LIMIT"):
            assert name in DEFAULTS


# =========================================================
# RANDOM STREAMS
# =========================================================

class TestRandomSource:
    """Tests for seeded streams and child streams."""

    def test_same_seed_same_sequence(self):
        """Equal (seed, stream) pairs give equal draws."""
        a = RandomSource(42).generator.random(5)
        b = RandomSource(42).generator.random(5)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        """Different seeds give different draws."""
        assert not np.array_equal(RandomSource(1).generator.random(5), RandomSource(2).generator.random(5))

    def test_spawn_is_reproducible(self):
        """spawn(i) is a pure function of (seed, key, i)."""
        a = RandomSource(7).spawn(3).generator.random(4)
        b = RandomSource(7).spawn(3).generator.random(4)
        assert np.array_equal(a, b)
        assert RandomSource(7).spawn(3).key == (0, 3)

    def test_spawn_does_not_consume_parent(self):
        """Spawning leaves the parent stream where it was."""
        parent = RandomSource(9)
        parent.spawn(0)
        assert np.array_equal(parent.generator.random(3), RandomSource(9).generator.random(3))

    def test_children_differ(self):
        """Sibling streams are distinct."""
        root = RandomSource(5)
        assert not np.array_equal(root.spawn(0).generator.random(4), root.spawn(1).generator.random(4))

    def test_as_generator_accepts_int_and_generator(self):
        """Ints are seeds; generators pass through."""
        gen = np.random.default_rng(0)
        assert as_generator(gen) is gen
        assert np.array_equal(as_generator(11).random(3), RandomSource(11).generator.random(3))


class TestBufferedDraws:
    """Tests for block-buffered draws."""

    def test_uniform_in_half_open_interval(self):
        """Uniforms lie in (0, 1] across block boundaries."""
        draws = BufferedDraws(RandomSource(1), block=16)
        values = [draws.uniform() for _ in range(100)]
        assert all(0.0 < v <= 1.0 for v in values)

    def test_block_size_does_not_change_stream(self):
        """Consumption order matches one long stream."""
        a = BufferedDraws(RandomSource(3), block=7)
        b = BufferedDraws(RandomSource(3), block=64)
        assert [a.uniform() for _ in range(30)] == [b.uniform() for _ in range(30)]

    def test_index_range(self):
        """index(n) stays in range(n)."""
        draws = BufferedDraws(RandomSource(4))
        assert {draws.index(3) for _ in range(500)} == {0, 1, 2}

    def test_exponential_mean(self):
        """Exponential draws have the requested mean."""
        draws = BufferedDraws(RandomSource(8))
        values = [draws.exponential(2.0) for _ in range(20_000)]
        assert min(values) > 0
        assert abs(np.mean(values) - 2.0) < 0.1


# =========================================================
# TRAJECTORIES
# =========================================================

class TestTrajectoryConstruction:
    """Tests for trajectory validation and builders."""

    def test_state_count_must_match(self):
        """One more state than jump times."""
        with pytest.raises(InputError):
            Trajectory(1.0, np.array([0.5]), np.array([1]))

    def test_jump_times_inside_horizon(self):
        """Jump times must lie strictly inside (0, T)."""
        with pytest.raises(InputError):
            Trajectory(1.0, np.array([1.0]), np.array([1, 2]))
        with pytest.raises(InputError):
            Trajectory(1.0, np.array([0.0]), np.array([1, 2]))

    def test_jump_times_increasing(self):
        """Repeated jump times are rejected."""
        with pytest.raises(InputError):
            Trajectory(1.0, np.array([0.3, 0.3]), np.array([1, 2, 3]))

    def test_horizon_positive(self):
        """Empty time intervals are rejected."""
        with pytest.raises(InputError):
            Trajectory.constant(1, 0.0)

    def test_from_segments_merges_and_drops(self):
        """Equal neighbours merge and short pieces vanish."""
        traj = Trajectory.from_segments([(0.0, 0.3, 1), (0.3, 0.5, 1), (0.5, 0.5, 9), (0.5, 1.0, 2)])
        assert traj.states.tolist() == [1, 2]
        assert traj.jump_times.tolist() == [0.5]

    def test_from_segments_needs_content(self):
        """At least one piece of positive length."""
        with pytest.raises(InputError):
            Trajectory.from_segments([])

    def test_step_function_breaks(self):
        """Breakpoints start at 0 and have one more entry than values."""
        with pytest.raises(InputError):
            step_function([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(InputError):
            step_function([0.1, 1.0], [1.0])


class TestTrajectoryQueries:
    """Tests for evaluation and transformations."""

    def test_value_at_is_right_continuous(self, three_piece):
        """The value at a jump time is the new value."""
        assert three_piece.value_at(0.0) == 0.0
        assert three_piece.value_at(0.2) == 2.0
        assert three_piece.value_at(0.49) == 2.0
        assert three_piece.value_at(1.0) == 1.0

    def test_value_at_outside(self, three_piece):
        """Times outside [0, T] are rejected."""
        with pytest.raises(InputError):
            three_piece.value_at(1.5)

    def test_durations_and_occupation(self, three_piece):
        """Durations sum to T; occupation groups by state."""
        assert math.isclose(three_piece.durations().sum(), 1.0)
        occ = three_piece.occupation()
        assert math.isclose(occ[2.0], 0.3)
        assert math.isclose(occ[1.0], 0.5)

    def test_truncated(self, three_piece):
        """Truncation keeps the layout up to the new horizon."""
        short = three_piece.truncated(0.4)
        assert short.horizon == 0.4
        assert short.states.tolist() == [0.0, 2.0]
        with pytest.raises(InputError):
            three_piece.truncated(2.0)

    def test_scaled(self, three_piece):
        """Scaling stretches jump times and horizon alike."""
        doubled = three_piece.scaled(2.0)
        assert doubled.horizon == 2.0
        assert np.allclose(doubled.jump_times, [0.4, 1.0])

    def test_map_states(self, three_piece):
        """State mapping keeps the segment layout."""
        mapped = three_piece.map_states(lambda s: s * 10)
        assert mapped.states.tolist() == [0.0, 20.0, 10.0]
        assert np.array_equal(mapped.jump_times, three_piece.jump_times)

    def test_equality(self, three_piece):
        """Equality compares layout and states, not the jump-value annotation."""
        assert three_piece == step_function([0.0, 0.2, 0.5, 1.0], [0.0, 2.0, 1.0])
        assert three_piece != step_function([0.0, 0.2, 0.5, 1.0], [0.0, 2.0, 3.0])


class TestTrajectoryJsonl:
    """Tests for the JSONL file format."""

    def test_write_and_read(self, tmp_path, three_piece):
        """A written trajectory reads back equal."""
        path = tmp_path / "traj.jsonl"
        three_piece.to_jsonl(path)
        assert Trajectory.from_jsonl(path) == three_piece
        assert len(path.read_text().splitlines()) == 3

    def test_gaps_rejected(self, tmp_path):
        """Non-contiguous segments are an input error."""
        path = tmp_path / "gap.jsonl"
        path.write_text(
            '{"t_start": 0.0, "t_end": 0.5, "state": 1}\n{"t_start": 0.6, "t_end": 1.0, "state": 2}\n'
        )
        with pytest.raises(InputError):
            Trajectory.from_jsonl(path)

    def test_empty_file_rejected(self, tmp_path):
        """Files without segments are an input error."""
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(InputError):
            Trajectory.from_jsonl(path)
