"""Derivatives of E_x f(X_t) in the initial segment.

The estimator is

    grad_z E_x f(X_t) = E <grad f(X_t), U_t> + lam E[f(X_t) int_0^t sigma(X_s)^-1 U(s) dW(s)]

where U solves the linearised equation along X with an extra damping
-lam U dt. Every lam gives the same value; larger lam makes the first term
decay faster and moves the cost into the weight.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import linregress, t as student_t

from .core.grid import PathGrid, Segment
from .core.integrator import em_simulate
from .core.model import eval_right_inverse, matvec
from .core.noise import resolve_increments
from .errors import DomainError, EmptyBatchError, GridMismatchError, InsufficientRunsError, NonFiniteStateError


logger = logging.getLogger(__name__)

MIN_DECAY_RUNS = 100
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class SensitivityRun:
    u_path: PathGrid
    weight_integral: np.ndarray
    lam: float
    direction: Segment

    @property
    def batch_shape(self):
        return self.u_path.batch_shape

    @classmethod
    def concatenate(cls, runs):
        runs = list(runs)
        if not runs:
            raise EmptyBatchError("no sensitivity runs to concatenate")
        return cls(
            PathGrid.concatenate(run.u_path for run in runs),
            np.concatenate([np.atleast_1d(run.weight_integral) for run in runs]),
            runs[0].lam,
            runs[0].direction,
        )


@dataclass(frozen=True)
class GradientEstimate:
    value: float
    std_error: float
    n_paths: int
    lam: Optional[float]
    t: float

    @classmethod
    def from_samples(cls, samples, lam, t):
        samples = np.ravel(np.asarray(samples, dtype=float))
        if samples.size == 0:
            raise EmptyBatchError("a gradient estimate needs at least one sample")
        std_error = float(np.std(samples, ddof=1)) / math.sqrt(samples.size) if samples.size > 1 else float('nan')
        return cls(value=float(np.mean(samples)), std_error=std_error, n_paths=int(samples.size), lam=lam, t=t)

    def agrees_with(self, other, z=3.0):
        """|self - other| within z combined standard errors, up to rounding.

        Deterministic estimators have zero standard error, hence the relative slack.
        """
        slack = ROUNDING_SLACK * max(1.0, abs(self.value), abs(other.value))
        return abs(self.value - other.value) <= z * math.hypot(self.std_error, other.std_error) + slack


def solve_U(model, x_path, lam, z, skip_weight=False):
    """Euler scheme for dU = <grad a(X), U> dt + <grad sigma(X), U> dW - lam U dt from U_0 = z.

    Reuses the increments stored on ``x_path``. ``skip_weight`` is only
    allowed for lam = 0, where the weight term drops out of the estimator.
    """
    model.require_gradients()
    if lam < 0:
        raise DomainError("lambda must be non-negative, got {!r}".format(lam))
    if skip_weight and lam > 0:
        raise DomainError("the weight integral is required when lambda > 0")
    grid = x_path.grid
    if not grid.same_segments(z.grid) or z.dim != model.dim_state:
        raise GridMismatchError("direction z does not live on the path's segment grid")

    dt = grid.dt
    length = grid.segment_length
    steps = x_path.steps
    batch_shape = x_path.batch_shape
    increments = x_path.noise_increments

    u = np.empty(x_path.states.shape)
    u[..., :length, :] = np.broadcast_to(z.values, batch_shape + z.values.shape[-2:])

    for k in range(steps):
        x_window = x_path.states[..., k:k + length, :]
        u_window = u[..., k:k + length, :]
        drift = np.asarray(model.drift_gradient(x_window, u_window), dtype=float)
        sigma = np.broadcast_to(
            np.asarray(model.diffusion_gradient(x_window, u_window), dtype=float),
            batch_shape + (model.dim_state, model.dim_noise),
        )
        current = u_window[..., -1, :]
        u[..., k + length, :] = current + (drift - lam * current) * dt + matvec(sigma, increments[..., k, :])
        if not np.all(np.isfinite(u[..., k + length, :])):
            raise NonFiniteStateError("derivative process diverged", step=k)

    run = SensitivityRun(PathGrid(u, increments, grid), np.zeros(batch_shape), float(lam), z)
    if skip_weight:
        return run
    return SensitivityRun(run.u_path, weight_integral(model, x_path, run), run.lam, z)


def weight_integral(model, x_path, run):
    """Left-endpoint Ito sum of sigma(X_{t_k})^-1 U(t_k) . dW_k over the horizon."""
    model.require_right_inverse()
    length = x_path.grid.segment_length
    total = np.zeros(x_path.batch_shape)
    for k in range(x_path.steps):
        inverse = eval_right_inverse(model, x_path.states[..., k:k + length, :])
        eta = matvec(inverse, run.u_path.states[..., k + length - 1, :])
        total = total + np.sum(eta * x_path.noise_increments[..., k, :], axis=-1)
    return total


def _zero_like(seg):
    return Segment(np.zeros(seg.values.shape[-2:]), seg.grid)


def gradient_samples(model, x, z, f, grad_f, t, lam, noise):
    """Per-path summands <grad f(X_t), U_t> + lam (f(X_t) - f(0)) W_t.

    ``f`` maps a batched segment to one value per row and ``grad_f(x, u)``
    returns the pairing <grad f(x), u> row-wise. Centring by f at the zero
    segment leaves the mean unchanged since the weight has mean zero.
    """
    if lam > 0:
        model.require_right_inverse()
    steps = x.grid.steps_for(t, 't')
    if steps < 1:
        raise DomainError("t must be positive")
    path = em_simulate(model, x, steps, noise)
    run = solve_U(model, path, lam, z, skip_weight=(lam == 0))

    x_t = path.terminal
    u_t = run.u_path.terminal
    samples = np.asarray(grad_f(x_t, u_t), dtype=float)
    if lam > 0:
        f_center = float(np.asarray(f(_zero_like(x))).reshape(-1)[0])
        samples = samples + lam * (np.asarray(f(x_t), dtype=float) - f_center) * run.weight_integral
    return samples


def estimate_gradient(model, x, z, f, grad_f, t, lam, noise):
    samples = gradient_samples(model, x, z, f, grad_f, t, lam, noise)
    return GradientEstimate.from_samples(samples, float(lam), float(t))


def fd_samples(model, x, z, f, t, eps, noise):
    """Per-path (f(X_t^{x + eps z}) - f(X_t^x)) / eps with common random numbers."""
    if eps == 0:
        raise DomainError("eps must be non-zero")
    grid = x.grid
    steps = grid.steps_for(t, 't')
    if steps < 1:
        raise DomainError("t must be positive")
    increments = resolve_increments(noise, steps, model.dim_noise, grid.dt)
    base = em_simulate(model, x, steps, increments)
    bumped = em_simulate(model, x + z * eps, steps, increments)
    return (np.asarray(f(bumped.terminal), dtype=float) - np.asarray(f(base.terminal), dtype=float)) / eps


def fd_oracle(model, x, z, f, t, eps, noise):
    return GradientEstimate.from_samples(fd_samples(model, x, z, f, t, eps, noise), None, float(t))


@dataclass(frozen=True)
class DecayFit:
    rate: float
    ci_halfwidth: float
    intercept: float
    mean_sq_norms: np.ndarray
    n_runs: int
    degenerate: bool = False


def decay_diagnostic(runs, times, min_runs=MIN_DECAY_RUNS):
    """Least-squares slope of log E||U_t||^2 (segment sup norm) against t, with a 95% CI."""
    if isinstance(runs, (list, tuple)):
        runs = SensitivityRun.concatenate(runs)
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise DomainError("decay_diagnostic needs at least two times")
    n_runs = int(np.prod(runs.batch_shape)) if runs.batch_shape else 1
    if n_runs < min_runs:
        raise InsufficientRunsError("decay_diagnostic needs {} runs, got {}".format(min_runs, n_runs))

    grid = runs.u_path.grid
    mean_sq = np.asarray([
        np.mean(np.asarray(runs.u_path.segment_at(grid.steps_for(t, 't')).norm()) ** 2) for t in times
    ])
    if np.any(mean_sq == 0):
        logger.info(
            "{code}: derivative process vanishes, decay rate undefined",
            extra={'code': 'sensitivity.degenerate-decay'}
        )
        return DecayFit(float('nan'), float('nan'), float('nan'), mean_sq, n_runs, degenerate=True)

    fit = linregress(times, np.log(mean_sq))
    if times.size > 2:
        halfwidth = float(student_t.ppf(0.975, times.size - 2) * fit.stderr)
    else:
        halfwidth = float('nan')
    return DecayFit(float(fit.slope), halfwidth, float(fit.intercept), mean_sq, n_runs)
