import math

import mock
import numpy as np
import pytest

from sddekit.core.noise import BrownianNoise
from sddekit.diagnostics import (
    OVERSHOOT_NOTE,
    DeterministicDriver,
    SquaredOUDriver,
    TailBoundSpec,
    exceedance_frequency,
    tail_bound_check,
    tail_threshold,
)
from sddekit.errors import AllPathsDiscardedError, DomainError


class TestTailThreshold(object):

    def test_value(self):
        spec = TailBoundSpec(A=1.0, B=4.0, lam=2.0, delta=0.25, T=1.0)
        assert tail_threshold(spec, 3.0) == pytest.approx(0.5 + 2.0 * 2.0 ** -0.25 * 3.0)

    def test_array(self):
        spec = TailBoundSpec(A=0.0, B=1.0, lam=1.0, delta=0.25, T=1.0)
        assert tail_threshold(spec, np.array([0.0, 1.0])).tolist() == [0.0, 1.0]

    def test_negative_R(self):
        with pytest.raises(DomainError):
            tail_threshold(TailBoundSpec(1.0, 1.0, 1.0, 0.25, 1.0), -1.0)

    @pytest.mark.parametrize('args', [
        (-1.0, 1.0, 1.0, 0.25, 1.0),
        (1.0, 0.0, 1.0, 0.25, 1.0),
        (1.0, 1.0, 0.0, 0.25, 1.0),
        (1.0, 1.0, 1.0, 0.5, 1.0),
        (1.0, 1.0, 1.0, 0.25, 0.0),
    ])
    def test_spec_domain(self, args):
        with pytest.raises(DomainError):
            TailBoundSpec(*args)


class TestTailBoundCheck(object):

    def test_deterministic_driver_never_exceeds(self):
        driver = DeterministicDriver(A=1.0, lam=2.0, v0=3.0)
        spec = driver.tail_spec(0.25, 2.0)
        report = tail_bound_check(driver, spec, [0.1, 0.5, 1.0], BrownianNoise.paths(0, 20), 0.01)

        assert report.frequencies.tolist() == [0.0, 0.0, 0.0]
        assert report.n_paths == 20
        assert report.n_discarded == 0
        assert report.overshoot_note == OVERSHOOT_NOTE
        assert math.isnan(report.slope)

    def test_squared_ou_tail_decays(self):
        driver = SquaredOUDriver(theta=1.0, s=1.0, cap=25.0)
        spec = driver.tail_spec(0.25, 1.0)
        R_grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
        report = tail_bound_check(driver, spec, R_grid, BrownianNoise.paths(0, 10000), 0.01)

        assert report.n_discarded == 0
        assert np.all(np.diff(report.frequencies) <= 0)
        assert report.slope < 0
        assert report.slope_negative

    @mock.patch('sddekit.diagnostics.logger')
    def test_paths_breaking_the_caps_are_voided(self, logger):
        driver = DeterministicDriver(A=1.0, lam=2.0, v0=3.0)
        spec = TailBoundSpec(A=0.0, B=1.0, lam=2.0, delta=0.25, T=1.0)

        with pytest.raises(AllPathsDiscardedError):
            tail_bound_check(driver, spec, [0.5], BrownianNoise.paths(0, 5), 0.1)

        assert logger.warning.call_args_list == [
            mock.call(
                "{code}: {discarded} of {paths} paths break the declared drift or variation caps",
                extra={'code': 'tailcheck.discarded', 'discarded': 5, 'paths': 5}
            )
        ]

    def test_empty_R_grid(self):
        driver = DeterministicDriver(A=1.0, lam=2.0, v0=3.0)
        with pytest.raises(DomainError):
            tail_bound_check(driver, driver.tail_spec(0.25, 1.0), [], BrownianNoise.paths(0, 2), 0.1)

    def test_squared_ou_driver_domain(self):
        with pytest.raises(DomainError):
            SquaredOUDriver(theta=0.0, s=1.0, cap=1.0)


class TestExceedanceFrequency(object):

    def test_levels(self):
        driver = SquaredOUDriver(theta=1.0, s=1.0, cap=25.0)
        report = tail_bound_check(driver, driver.tail_spec(0.25, 1.0), [0.5], BrownianNoise.paths(1, 200), 0.01)

        # the statistic includes t = 0, where the gap is zero
        assert exceedance_frequency(report, [0.0, 1e9]).tolist() == [1.0, 0.0]
