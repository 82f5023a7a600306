import itertools

import numpy as np
import pytest

from sddekit.core.grid import Segment
from sddekit.coupling import MetricSpec
from sddekit.errors import EmptyBatchError, LipschitzViolationError, SampleSizeError
from sddekit.ergodicity.transport import (
    as_sample,
    cost_matrix,
    empirical_coupling_distance,
    kr_dual_value,
    transport_value,
)
from sddekit.seeds import path_generator

from ..helpers import constant, unit_grid


def sample_of(grid, heads):
    return Segment.stack([constant(grid, head) for head in heads])


def brute_force(cost):
    n = cost.shape[0]
    return min(sum(cost[i, p[i]] for i in range(n)) / n for p in itertools.permutations(range(n)))


def clipped_head(seg):
    return np.clip(seg.head[..., 0], 0.0, 1.0)


class TestTransportValue(object):

    def test_matches_brute_force_on_three_by_three(self):
        rng = path_generator(0, 0, 'ot-check')
        for _ in range(100):
            cost = rng.uniform(0, 1, (3, 3))
            assert abs(transport_value(cost) - brute_force(cost)) <= 1e-12

    def test_unequal_sizes(self):
        grid = unit_grid()
        value = empirical_coupling_distance(sample_of(grid, [0.0, 1.0]), sample_of(grid, [0.0, 0.5, 1.0]), MetricSpec())
        assert value == pytest.approx(1 / 6, abs=1e-9)

    def test_identical_samples(self):
        grid = unit_grid()
        sample = sample_of(grid, [0.1, 0.4, -2.0])
        assert empirical_coupling_distance(sample, sample, MetricSpec()) == 0.0


class TestEmpiricalCouplingDistance(object):

    def test_cost_is_truncated(self):
        grid = unit_grid()
        cost = cost_matrix(sample_of(grid, [0.0]), sample_of(grid, [0.25, 5.0]), MetricSpec(2.0, 1.0))
        assert cost.tolist() == [[0.5, 1.0]]

    def test_cap_on_sample_size(self):
        grid = unit_grid()
        with pytest.raises(SampleSizeError) as e:
            empirical_coupling_distance(sample_of(grid, [0, 1, 2]), sample_of(grid, [0]), MetricSpec(), max_samples=2)
        assert 'sample_a' in str(e.value)

    def test_accepts_a_list_of_segments(self):
        grid = unit_grid()
        value = empirical_coupling_distance([constant(grid, 0.0)], [constant(grid, 0.3)], MetricSpec())
        assert value == pytest.approx(0.3)

    def test_empty_sample(self):
        with pytest.raises(EmptyBatchError):
            as_sample([])


class TestKRDual(object):

    def test_never_exceeds_the_transport_value(self):
        grid = unit_grid()
        rng = path_generator(1, 0, 'kr-check')
        spec = MetricSpec()
        for _ in range(20):
            a = sample_of(grid, rng.normal(0.5, 0.5, 4))
            b = sample_of(grid, rng.normal(0.2, 0.5, 5))
            assert kr_dual_value(clipped_head, a, b, spec) <= empirical_coupling_distance(a, b, spec) + 1e-12

    def test_value(self):
        grid = unit_grid()
        assert kr_dual_value(clipped_head, sample_of(grid, [0.2, 0.4]), sample_of(grid, [0.0]), MetricSpec()) == \
            pytest.approx(0.3)

    def test_rejects_a_steep_functional(self):
        grid = unit_grid()
        with pytest.raises(LipschitzViolationError) as e:
            kr_dual_value(lambda seg: 2 * seg.head[..., 0], sample_of(grid, [0.0, 0.1]), sample_of(grid, [0.3]),
                          MetricSpec())
        assert e.value.ratio == pytest.approx(2.0)
        assert set(e.value.pair) <= {'sample_a[0]', 'sample_a[1]', 'sample_b[0]'}
