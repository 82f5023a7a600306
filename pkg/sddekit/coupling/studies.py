"""Monte Carlo studies built on controlled runs: approximation by smooth models and the support probe."""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..core.grid import Segment, sup_dist
from ..core.integrator import em_simulate
from ..core.model import eval_diffusion, eval_drift, eval_right_inverse, matvec
from ..core.noise import resolve_increments
from ..errors import DomainError
from ..girsanov import GirsanovLedger, accumulate, best_lower_bound
from .runs import pursue, warn_if_stiff


logger = logging.getLogger(__name__)

UPSILON_FLOOR = 1e-12


@dataclass(frozen=True)
class ApproximationRow:
    eps: float
    upsilon: float
    floored: bool
    gain: float
    success_freq: float
    kl_mean: float
    kl_max: float
    kl_bound: float
    kl_bound_respected: bool
    n_paths: int


@dataclass(frozen=True)
class ApproximationReport:
    rows: List[ApproximationRow]

    @property
    def success_non_decreasing(self):
        """True when the success frequency does not drop as eps shrinks."""
        ordered = sorted(self.rows, key=lambda row: -row.eps)
        return all(b.success_freq >= a.success_freq for a, b in zip(ordered, ordered[1:]))


def mollification_gap(model, approx, probes, floor=UPSILON_FLOOR):
    """upsilon = max(sup|a' - a|^(1/alpha), sup||sigma' - sigma||^(1/beta)) over the probe cloud.

    Returns ``(upsilon, floored)``; values under ``floor`` are raised to it.
    """
    values = probes.values
    drift_gap = np.max(np.linalg.norm(eval_drift(approx, values) - eval_drift(model, values), axis=-1))
    sigma_gap = np.max(np.linalg.norm(
        eval_diffusion(approx, values) - eval_diffusion(model, values), axis=(-2, -1)
    ))
    upsilon = max(drift_gap ** (1 / model.holder_alpha), sigma_gap ** (1 / model.holder_beta))
    if upsilon < floor:
        return floor, True
    return float(upsilon), False


def _inverse_bound(model, probes):
    if model.inverse_bound is not None:
        return model.inverse_bound
    return float(np.max(np.linalg.norm(eval_right_inverse(model, probes.values), axis=(-2, -1))))


def approximation_study(model, mollified, x0, T, gamma, noise, probes, floor=UPSILON_FLOOR,
                        threshold_mult=1.0):
    """Track the solution X of ``model`` by controlled solutions of each smooth approximation.

    ``mollified`` maps eps to a Lipschitz model. For each eps, Y^eps starts at
    ``x0`` and is pulled by upsilon^(gamma-1) (X - Y^eps) until
    |X - Y^eps| >= threshold_mult * upsilon. Success means the grid sup of
    |Y^eps - X| over [0, T] stays within upsilon.
    """
    grid = x0.grid
    steps = grid.steps_for(T, 'T')
    increments = resolve_increments(noise, steps, model.dim_noise, grid.dt)
    path_x = em_simulate(model, x0, steps, increments)
    length = grid.segment_length

    rows = []
    for eps in sorted(mollified, reverse=True):
        approx = mollified[eps]
        upsilon, floored = mollification_gap(model, approx, probes, floor)
        if floored:
            logger.info(
                "{code}: approximation at eps {eps} is indistinguishable on the probes, upsilon floored",
                extra={'code': 'approx-study.upsilon-floor', 'eps': eps}
            )
        gain = upsilon ** (gamma - 1)
        warn_if_stiff(np.asarray([gain]), grid.dt)

        path_y, _, _, ledger = pursue(approx, path_x, x0, gain, threshold_mult * upsilon)
        deviation = np.max(np.linalg.norm(
            path_y.states[..., length - 1:, :] - path_x.states[..., length - 1:, :], axis=-1
        ), axis=-1)
        kl = np.atleast_1d(ledger.kl_half_integral)
        kl_bound = 0.5 * T * _inverse_bound(approx, probes) ** 2 * (threshold_mult * upsilon ** gamma) ** 2

        rows.append(ApproximationRow(
            eps=float(eps),
            upsilon=upsilon,
            floored=floored,
            gain=float(gain),
            success_freq=float(np.mean(deviation <= upsilon)),
            kl_mean=float(np.mean(kl)),
            kl_max=float(np.max(kl)),
            kl_bound=float(kl_bound),
            kl_bound_respected=bool(np.all(kl <= kl_bound * (1 + 1e-9))),
            n_paths=int(kl.size),
        ))

    return ApproximationReport(rows)


def bridge_target(z, h, grid):
    """z^h on the grid times 0, dt, ..., h: a ramp from 0 to z(-r), then z shifted to end at h."""
    steps = grid.steps_for(h, 'h')
    if steps <= grid.delay_steps:
        raise DomainError("h = {!r} must exceed the delay r = {!r}".format(h, grid.r))
    ramp_steps = steps - grid.delay_steps
    fraction = np.arange(ramp_steps) / ramp_steps
    ramp = fraction[:, None] * z.values[0][None, :]
    return np.concatenate([ramp, z.values])


@dataclass(frozen=True)
class SupportProbeReport:
    success_prob: float
    kl_mean: float
    lower_bound: float
    log_n: float
    n_paths: int


def support_probe(model, x, z, h, delta, lam, noise, log_n_grid=None):
    """Probability that the segment at h lands within delta of z, and what it certifies uncontrolled.

    The controlled process is pulled by -lam (X - z^h(t)); its KL ledger and
    the success frequency feed ``best_lower_bound``.
    """
    if not delta > 0:
        raise DomainError("delta must be positive, got {!r}".format(delta))
    if lam < 0:
        raise DomainError("lambda must be non-negative, got {!r}".format(lam))
    model.require_right_inverse()

    grid = x.grid
    target = bridge_target(z, h, grid)
    steps = target.shape[0] - 1
    warn_if_stiff(np.asarray([lam]), grid.dt)

    def pull(k, window):
        return -lam * (window[..., -1, :] - target[k])

    path = em_simulate(model, x, steps, noise, control=pull)

    length = grid.segment_length
    ledger = GirsanovLedger.empty(path.batch_shape)
    for k in range(steps):
        window = path.states[..., k:k + length, :]
        eta = matvec(eval_right_inverse(model, window), pull(k, window))
        ledger = accumulate(ledger, eta, path.noise_increments[..., k, :], grid.dt)

    hits = np.atleast_1d(sup_dist(path.segment_at(steps), Segment(z.values, path.grid)) <= delta)
    success_prob = float(np.mean(hits))
    kl_mean = float(np.mean(ledger.kl_half_integral))
    lower_bound, log_n = best_lower_bound(success_prob, kl_mean, log_n_grid)

    return SupportProbeReport(
        success_prob=success_prob,
        kl_mean=kl_mean,
        lower_bound=lower_bound,
        log_n=log_n,
        n_paths=int(hits.size),
    )
