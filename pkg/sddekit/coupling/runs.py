"""Synchronous and controlled couplings of two solutions.

A controlled run keeps X exact and steers Y towards it with the drift
chi(t) = gain (X(t) - Y(t)) until the stopping index tau, the first grid time
with |X - Y| >= threshold. The induced change of law of Y is booked in a
Girsanov ledger so that it can be paid back later.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.grid import PathGrid, sup_dist
from ..core.integrator import em_simulate, em_step
from ..core.model import eval_right_inverse, matvec
from ..core.noise import resolve_increments
from ..errors import DomainError, EmptyBatchError
from ..girsanov import GirsanovLedger, accumulate, importance_weight, pinsker_tv_bound


logger = logging.getLogger(__name__)

NOT_STOPPED = np.iinfo(np.int64).max

WITH_LEDGER = 'with_ledger'
NO_LEDGER = 'no_ledger'
MODES = (WITH_LEDGER, NO_LEDGER)

HOLDER_LAW = 'holder'
LINEAR_LAW = 'linear'
LAWS = (HOLDER_LAW, LINEAR_LAW)

# explicit Euler on the pursuit gap is unstable beyond this
STABLE_GAIN_DT = 2.0


@dataclass(frozen=True)
class ControlSpec:
    gamma: float
    threshold_mult: float = 2.0
    mode: str = WITH_LEDGER
    law: str = HOLDER_LAW
    gain: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise DomainError("gamma must lie in (0, 1], got {!r}".format(self.gamma))
        if not self.threshold_mult > 0:
            raise DomainError("threshold_mult must be positive, got {!r}".format(self.threshold_mult))
        if self.mode not in MODES:
            raise DomainError("mode must be one of {}, got {!r}".format(MODES, self.mode))
        if self.law not in LAWS:
            raise DomainError("law must be one of {}, got {!r}".format(LAWS, self.law))
        if self.law == LINEAR_LAW and not (self.gain is not None and self.gain > 0):
            raise DomainError("the linear law needs a positive gain")

    def gain_for(self, upsilon):
        upsilon = np.asarray(upsilon, dtype=float)
        if self.law == LINEAR_LAW:
            return np.full(upsilon.shape, float(self.gain))
        with np.errstate(divide='ignore'):
            return np.where(upsilon > 0, upsilon ** (self.gamma - 1), 0.0)


@dataclass(frozen=True, eq=False)
class CoupledRun:
    path_x: PathGrid
    path_y: PathGrid
    control_record: np.ndarray
    tau_step: np.ndarray
    upsilon: np.ndarray
    ledger: GirsanovLedger
    gamma_admissible: bool = True

    @property
    def grid(self):
        return self.path_x.grid

    @property
    def steps(self):
        return self.path_x.steps

    @property
    def batch_shape(self):
        return self.path_x.batch_shape

    @property
    def stopped(self):
        return self.tau_step != NOT_STOPPED

    def distance_at(self, k):
        return sup_dist(self.path_x.segment_at(k), self.path_y.segment_at(k))

    def importance_weights(self):
        return importance_weight(self.ledger)

    def __len__(self):
        return len(self.path_x)

    def __getitem__(self, index):
        return CoupledRun(
            self.path_x[index],
            self.path_y[index],
            self.control_record[index],
            self.tau_step[index],
            self.upsilon[index],
            self.ledger[index],
            self.gamma_admissible,
        )

    @classmethod
    def concatenate(cls, runs):
        runs = list(runs)
        if not runs:
            raise EmptyBatchError("no coupled runs to concatenate")
        return cls(
            PathGrid.concatenate(run.path_x for run in runs),
            PathGrid.concatenate(run.path_y for run in runs),
            np.concatenate([run.control_record for run in runs]),
            np.concatenate([run.tau_step for run in runs]),
            np.concatenate([run.upsilon for run in runs]),
            GirsanovLedger.concatenate(run.ledger for run in runs),
            all(run.gamma_admissible for run in runs),
        )


def _shared_noise(model, x, y, steps, noise):
    increments = resolve_increments(noise, steps, model.dim_noise, x.grid.dt)
    batch_shape = np.broadcast_shapes(x.batch_shape, y.batch_shape, increments.shape[:-2])
    return np.broadcast_to(increments, batch_shape + increments.shape[-2:]), batch_shape


def run_synchronous(model, x, y, steps, noise):
    """Drive both solutions with the identical noise path and no control."""
    increments, batch_shape = _shared_noise(model, x, y, steps, noise)
    path_x = em_simulate(model, x, steps, increments)
    path_y = em_simulate(model, y, steps, increments)
    return CoupledRun(
        path_x,
        path_y,
        np.zeros(batch_shape + (steps, model.dim_state)),
        np.full(batch_shape, NOT_STOPPED),
        np.broadcast_to(np.asarray(sup_dist(x, y), dtype=float), batch_shape).copy(),
        GirsanovLedger.empty(batch_shape),
    )


def pursue(model, target, y0, gain, threshold, with_ledger=True):
    """Solve Y from ``y0`` with drift gain (X - Y) towards the stored ``target`` path X.

    Y reuses the target's increments. Control is switched off from the first
    grid index where |X - Y| >= threshold onwards (that index included, so the
    control never exceeds gain * threshold). Returns
    ``(path_y, control_record, tau_step, ledger)``; the ledger books
    beta = -sigma(Y)^{-1} chi, which makes its importance weight the density
    that turns expectations over Y back into expectations over the
    uncontrolled solution started at ``y0``.
    """
    grid = target.grid
    dt = grid.dt
    length = grid.segment_length
    steps = target.steps
    batch_shape = target.batch_shape
    if with_ledger:
        model.require_right_inverse()

    gain = np.broadcast_to(np.asarray(gain, dtype=float), batch_shape)
    threshold = np.broadcast_to(np.asarray(threshold, dtype=float), batch_shape)
    increments = target.noise_increments

    states = np.empty(batch_shape + (length + steps, model.dim_state))
    states[..., :length, :] = np.broadcast_to(y0.values, batch_shape + y0.values.shape[-2:])
    controls = np.zeros(batch_shape + (steps, model.dim_state))
    tau = np.full(batch_shape, NOT_STOPPED)
    ledger = GirsanovLedger.empty(batch_shape)
    watch = threshold > 0

    for k in range(steps):
        window = states[..., k:k + length, :]
        gap = target.states[..., k + length - 1, :] - window[..., -1, :]
        crossed = watch & (tau == NOT_STOPPED) & (np.linalg.norm(gap, axis=-1) >= threshold)
        tau = np.where(crossed, k, tau)
        active = (tau == NOT_STOPPED)[..., None]

        chi = np.where(active, gain[..., None] * gap, 0.0)
        controls[..., k, :] = chi
        dW = increments[..., k, :]
        if with_ledger:
            eta = matvec(eval_right_inverse(model, window), chi)
            ledger = accumulate(ledger, -eta, dW, dt)
        states[..., k + length, :] = em_step(model, window, dW, dt, chi)

    final_gap = np.linalg.norm(target.states[..., -1, :] - states[..., -1, :], axis=-1)
    tau = np.where(watch & (tau == NOT_STOPPED) & (final_gap >= threshold), steps, tau)

    if not with_ledger:
        ledger = GirsanovLedger(np.zeros(batch_shape), np.zeros(batch_shape), steps * dt)
    return PathGrid(states, increments.copy(), grid), controls, tau, ledger


def gamma_admissible(model, gamma):
    return gamma < min(model.holder_alpha, 2 * model.holder_beta - 1)


def run_controlled(model, x, y, spec, steps, noise):
    """Synchronous coupling plus the stopped control towards X."""
    upsilon = np.asarray(sup_dist(x, y), dtype=float)
    if np.all(upsilon == 0):
        logger.warning(
            "{code}: initial segments coincide, falling back to the synchronous coupling",
            extra={'code': 'coupling.zero-upsilon'}
        )
        return run_synchronous(model, x, y, steps, noise)
    if spec.mode == WITH_LEDGER:
        model.require_right_inverse()

    admissible = spec.law != HOLDER_LAW or gamma_admissible(model, spec.gamma)
    if not admissible:
        logger.warning(
            "{code}: gamma {gamma} is not below alpha ^ (2 beta - 1) = {limit} for model {model}",
            extra={
                'code': 'coupling.gamma-out-of-range',
                'gamma': spec.gamma,
                'limit': min(model.holder_alpha, 2 * model.holder_beta - 1),
                'model': model.name,
            }
        )

    increments, batch_shape = _shared_noise(model, x, y, steps, noise)
    upsilon = np.broadcast_to(upsilon, batch_shape).copy()
    gain = spec.gain_for(upsilon)
    warn_if_stiff(gain, x.grid.dt)

    path_x = em_simulate(model, x, steps, increments)
    path_y, controls, tau, ledger = pursue(
        model, path_x, y, gain, spec.threshold_mult * upsilon, with_ledger=spec.mode == WITH_LEDGER
    )
    return CoupledRun(path_x, path_y, controls, tau, upsilon, ledger, admissible)


def warn_if_stiff(gain, dt):
    worst = float(np.max(gain)) * dt if np.size(gain) else 0.0
    if worst >= STABLE_GAIN_DT:
        logger.warning(
            "{code}: control gain x dt = {gain_dt} makes the explicit step unstable; refine dt",
            extra={'code': 'coupling.stiff-control', 'gain_dt': worst}
        )
        return True
    return False


@dataclass(frozen=True)
class ContractionEstimate:
    exceed_prob: float
    mean_ratio: float
    tv_bound: float
    mean_kl: float
    n_runs: int
    degenerate: bool = False


def contraction_estimate(runs, h, theta):
    """Exceedance frequency of ||X_h - Y_h|| >= theta ||x - y||, mean ratio and the Pinsker bound."""
    if isinstance(runs, (list, tuple)):
        if not runs:
            raise EmptyBatchError("contraction_estimate needs at least one run")
        runs = CoupledRun.concatenate(runs)
    k = runs.grid.steps_for(h, 'h')
    if k > runs.steps:
        raise DomainError("h = {!r} lies beyond the simulated horizon".format(h))

    distance = np.atleast_1d(runs.distance_at(k)).ravel()
    if distance.size == 0:
        raise EmptyBatchError("contraction_estimate needs at least one run")
    upsilon = np.atleast_1d(runs.upsilon).ravel()
    mean_kl = float(np.mean(runs.ledger.kl_half_integral))
    tv_bound = pinsker_tv_bound(mean_kl)

    if np.all(upsilon == 0):
        logger.info(
            "{code}: identical initial segments, contraction ratio undefined",
            extra={'code': 'coupling.degenerate-batch'}
        )
        return ContractionEstimate(
            exceed_prob=float(np.mean(distance > 0)),
            mean_ratio=0.0,
            tv_bound=tv_bound,
            mean_kl=mean_kl,
            n_runs=int(distance.size),
            degenerate=True,
        )

    return ContractionEstimate(
        exceed_prob=float(np.mean(distance >= theta * upsilon)),
        mean_ratio=float(np.mean(distance / upsilon)),
        tv_bound=tv_bound,
        mean_kl=mean_kl,
        n_runs=int(distance.size),
    )


def n0_bound(theta, theta1, gamma, C_tv, C_p, upsilon0):
    """N0 = max(upsilon0^-gamma, (C_p + C_tv) / (theta1 - theta^gamma)).

    The second term is the form consistent with the inequality
    theta^gamma + (C_p + C_tv) / N <= theta1 that it has to guarantee.
    """
    if not 0 < theta < 1:
        raise DomainError("theta must lie in (0, 1), got {!r}".format(theta))
    if not 0 < gamma <= 1:
        raise DomainError("gamma must lie in (0, 1], got {!r}".format(gamma))
    if C_tv < 0 or C_p < 0:
        raise DomainError("C_tv and C_p must be non-negative")
    if not upsilon0 > 0:
        raise DomainError("upsilon0 must be positive, got {!r}".format(upsilon0))
    if not theta ** gamma < theta1 < 1:
        raise DomainError(
            "theta1 = {!r} must lie in (theta^gamma, 1) = ({!r}, 1)".format(theta1, theta ** gamma)
        )
    n1 = upsilon0 ** -gamma
    n2 = (C_p + C_tv) / (theta1 - theta ** gamma)
    return max(n1, n2)
