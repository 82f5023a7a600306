import math

import numpy as np
import pytest

from sddekit.core.noise import BrownianNoise
from sddekit.errors import DomainError, NonFiniteControlError, WeightOverflowError
from sddekit.girsanov import (
    MAX_LOG_WEIGHT,
    GirsanovLedger,
    accumulate,
    best_lower_bound,
    diff_lower_bound,
    gaussian_shift_tv,
    importance_weight,
    pinsker_tv_bound,
)


def _constant_shift_ledger(beta, T, dt=0.01, dW=None):
    steps = int(round(T / dt))
    ledger = GirsanovLedger.empty()
    for k in range(steps):
        ledger = accumulate(ledger, np.array([beta]), np.zeros(1) if dW is None else dW[k], dt)
    return ledger


class TestAccumulate(object):

    def test_constant_shift_is_integrated_exactly(self):
        ledger = _constant_shift_ledger(1.0, 2.0)
        assert abs(ledger.kl - 1.0) <= 1e-12
        assert ledger.t_elapsed == pytest.approx(2.0)

    def test_log_exponent_pairs_the_shift_with_the_noise(self):
        ledger = accumulate(GirsanovLedger.empty(), np.array([2.0]), np.array([0.5]), 0.1)
        assert ledger.log_exponent == pytest.approx(2.0 * 0.5 - 0.5 * 4.0 * 0.1)

    def test_batched_rows(self):
        ledger = accumulate(GirsanovLedger.empty((2,)), np.array([[1.0], [3.0]]), np.zeros((2, 1)), 0.5)
        assert ledger.kl.tolist() == [0.25, 2.25]
        assert ledger[1].kl == 2.25

    def test_non_finite_shift(self):
        with pytest.raises(NonFiniteControlError):
            accumulate(GirsanovLedger.empty(), np.array([np.inf]), np.zeros(1), 0.1)

    def test_needs_a_positive_step(self):
        with pytest.raises(DomainError):
            accumulate(GirsanovLedger.empty(), np.zeros(1), np.zeros(1), 0.0)

    def test_concatenate(self):
        ledgers = [GirsanovLedger(np.array([1.0]), np.array([0.0])), GirsanovLedger(np.array([2.0, 3.0]), np.zeros(2))]
        assert GirsanovLedger.concatenate(ledgers).kl.tolist() == [1.0, 2.0, 3.0]


class TestPinsker(object):

    def test_value(self):
        assert pinsker_tv_bound(1.0) == pytest.approx(0.7071, abs=1e-4)

    def test_negative_kl(self):
        with pytest.raises(DomainError):
            pinsker_tv_bound(-0.1)

    @pytest.mark.parametrize('beta', [0.1, 0.5, 1.0, 2.0, 4.0])
    @pytest.mark.parametrize('T', [0.25, 0.5, 1.0, 2.0, 4.0])
    def test_dominates_the_exact_gaussian_shift(self, beta, T):
        kl = _constant_shift_ledger(beta, T).kl
        assert pinsker_tv_bound(kl) >= gaussian_shift_tv(beta, T)

    def test_exact_shift_value(self):
        assert gaussian_shift_tv(1.0, 2.0) == pytest.approx(0.5205, abs=1e-4)


class TestLowerBounds(object):

    def test_diff_lower_bound_formula(self):
        N = math.e ** 2
        assert diff_lower_bound(0.5, 1.0, N) == pytest.approx(0.5 / N - (1 + math.log(2)) / (2 * N))

    def test_diff_lower_bound_may_be_negative(self):
        assert diff_lower_bound(0.01, 10.0, 2.0) < 0

    @pytest.mark.parametrize('args', [(0.5, 1.0, 1.0), (1.5, 1.0, 3.0), (0.5, -1.0, 3.0)])
    def test_diff_lower_bound_domain(self, args):
        with pytest.raises(DomainError):
            diff_lower_bound(*args)

    def test_best_lower_bound_is_positive_for_a_likely_event(self):
        value, log_n = best_lower_bound(0.9, 0.5)
        assert value > 0
        assert diff_lower_bound(0.9, 0.5, math.exp(log_n)) == pytest.approx(value)

    def test_best_lower_bound_beats_every_grid_point(self):
        grid = np.linspace(0.5, 20, 200)
        value, _ = best_lower_bound(0.6, 2.0, grid)
        assert all(value >= diff_lower_bound(0.6, 2.0, math.exp(s)) - 1e-15 for s in grid)

    def test_best_lower_bound_needs_positive_log_n(self):
        with pytest.raises(DomainError):
            best_lower_bound(0.5, 1.0, [0.0, 1.0])


class TestImportanceWeight(object):

    def test_mean_one(self):
        steps, dt = 100, 0.01
        dW = BrownianNoise.paths(11, 20000).increments(steps, 1, dt)
        ledger = GirsanovLedger.empty((20000,))
        for k in range(steps):
            ledger = accumulate(ledger, np.full((20000, 1), 1.0), dW[:, k], dt)
        weights = importance_weight(ledger)
        assert abs(np.mean(weights) - 1) <= 4 * np.std(weights) / math.sqrt(weights.size)

    def test_overflow(self):
        ledger = GirsanovLedger(np.zeros(1), np.array([MAX_LOG_WEIGHT + 1]))
        with pytest.raises(WeightOverflowError) as e:
            importance_weight(ledger)
        assert e.value.exponent == MAX_LOG_WEIGHT + 1


class TestMonotonicity(object):

    def test_kl_never_decreases_along_the_ledger(self):
        rng = np.random.default_rng(5)
        dt = 0.01
        ledger = GirsanovLedger.empty((50,))
        history = [ledger]
        for _ in range(200):
            ledger = accumulate(ledger, rng.normal(scale=3.0, size=(50, 2)), rng.normal(scale=0.1, size=(50, 2)), dt)
            history.append(ledger)

        kls = np.stack([entry.kl for entry in history])
        assert np.all(np.diff(kls, axis=0) >= 0)
        assert [entry.t_elapsed for entry in history] == sorted(entry.t_elapsed for entry in history)
        assert history[-1].t_elapsed == pytest.approx(2.0)

    def test_constant_shift_kl_grows_linearly_in_time(self):
        kls = [float(_constant_shift_ledger(1.5, T).kl) for T in (0.5, 1.0, 2.0)]
        assert kls == sorted(kls)
        assert kls[2] == pytest.approx(2 * kls[1])

    @pytest.mark.parametrize('N', [1.5, 10.0, 1e6])
    def test_diff_lower_bound_rises_with_mu_and_falls_with_kl(self, N):
        mus = np.linspace(0.0, 1.0, 21)
        kls = np.linspace(0.0, 20.0, 21)

        by_mu = [diff_lower_bound(mu, 1.0, N) for mu in mus]
        by_kl = [diff_lower_bound(0.5, kl, N) for kl in kls]
        assert all(b > a for a, b in zip(by_mu, by_mu[1:]))
        assert all(b < a for a, b in zip(by_kl, by_kl[1:]))
