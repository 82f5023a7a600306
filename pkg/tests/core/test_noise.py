import numpy as np
import pytest

from sddekit.core.noise import BrownianNoise, resolve_increments
from sddekit.errors import DomainError


class TestBrownianNoise(object):

    def test_a_subset_reproduces_the_rows_of_the_full_batch(self):
        full = BrownianNoise.paths(7, 5).increments(20, 2, 0.1)
        subset = BrownianNoise(7, [1, 3]).increments(20, 2, 0.1)
        assert np.array_equal(subset, full[[1, 3]])

    def test_single_path_has_no_batch_axis(self):
        draws = BrownianNoise(7, 2).increments(20, 1, 0.1)
        assert draws.shape == (20, 1)
        assert np.array_equal(draws, BrownianNoise.paths(7, 3).increments(20, 1, 0.1)[2])

    def test_range_of_one_keeps_the_batch_axis(self):
        assert BrownianNoise(7, range(4, 5)).increments(10, 1, 0.1).shape == (1, 10, 1)

    def test_stream_tags_separate_streams(self):
        base = BrownianNoise.paths(7, 2).increments(10, 1, 0.1)
        other = BrownianNoise.paths(7, 2).with_tag('aux').increments(10, 1, 0.1)
        assert not np.array_equal(base, other)

    def test_master_seed_changes_the_draws(self):
        assert not np.array_equal(
            BrownianNoise(1).increments(10, 1, 0.1),
            BrownianNoise(2).increments(10, 1, 0.1),
        )

    def test_increments_have_variance_dt(self):
        draws = BrownianNoise.paths(3, 2000).increments(50, 1, 0.1)
        assert np.mean(draws) == pytest.approx(0.0, abs=0.01)
        assert np.var(draws) == pytest.approx(0.1, rel=0.05)

    def test_paths_needs_at_least_one(self):
        with pytest.raises(DomainError):
            BrownianNoise.paths(0, 0)


class TestResolveIncrements(object):

    def test_passes_recorded_increments_through(self):
        recorded = np.ones((3, 4, 1))
        assert np.array_equal(resolve_increments(recorded, 4, 1, 0.1), recorded)

    def test_rejects_the_wrong_shape(self):
        with pytest.raises(DomainError):
            resolve_increments(np.ones((3, 5, 1)), 4, 1, 0.1)
