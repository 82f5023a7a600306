"""Skeleton chains and empirical convergence curves."""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import kstest

from ..core.integrator import em_simulate
from ..errors import DomainError
from ..seeds import path_generator
from .transport import MAX_OT_SAMPLES, as_sample, cost_matrix, empirical_coupling_distance, transport_value

def skeleton(path, h):
    """Segments of ``path`` at times h, 2h, ... up to its horizon."""
    k = path.grid.steps_for(h, 'h')
    if k == 0:
        raise DomainError("h must be positive")
    count = path.steps // k
    if count == 0:
        raise DomainError("path horizon {!r} is shorter than h = {!r}".format(path.steps * path.grid.dt, h))
    return [path.segment_at(j * k) for j in range(1, count + 1)]


def stationary_estimate(model, x0, burn_in, h, n_samples, noise, max_total_steps):
    """Thinned segments of one long trajectory after ``burn_in``, spaced ``h`` apart.

    A proxy for the invariant measure: the samples are correlated, spacing
    only weakens the correlation.
    """
    if n_samples < 0:
        raise DomainError("n_samples must be non-negative, got {!r}".format(n_samples))
    grid = x0.grid
    burn_steps = grid.steps_for(burn_in, 'burn_in')
    k = grid.steps_for(h, 'h')
    if k == 0:
        raise DomainError("h must be positive")
    if n_samples == 0:
        return []

    total = burn_steps + (n_samples - 1) * k
    if total > max_total_steps:
        raise DomainError(
            "burn_in + n_samples * h needs {} steps, above the limit of {}".format(total, max_total_steps)
        )
    path = em_simulate(model, x0, max(total, 1), noise)
    return [path.segment_at(burn_steps + j * k) for j in range(n_samples)]


@dataclass(frozen=True)
class DistanceCurve:
    times: np.ndarray
    distances: np.ndarray
    std_errors: np.ndarray
    n_paths: int
    heads: list = field(default_factory=list, repr=False)

    def non_increasing(self, z=1.96):
        """True unless some later distance exceeds an earlier one beyond the combined CI."""
        for i in range(len(self.distances) - 1):
            slack = z * math.hypot(self.std_errors[i], self.std_errors[i + 1])
            if self.distances[i + 1] > self.distances[i] + slack:
                return False
        return True


def _bootstrap_std(sample, reference, spec, n_boot, seed):
    if n_boot < 2:
        return 0.0
    cost = cost_matrix(sample, reference, spec)
    rng = path_generator(seed, 0, 'bootstrap')
    values = []
    for _ in range(n_boot):
        rows = rng.integers(0, cost.shape[0], cost.shape[0])
        values.append(transport_value(cost[rows]))
    return float(np.std(values, ddof=1))


def distance_curve(model, x, times, reference, spec, noise, n_boot=50, boot_seed=0, max_samples=MAX_OT_SAMPLES):
    """Empirical d_{N,gamma}-coupling distance between P_x^t and ``reference`` at each t.

    One batch of paths is simulated up to the last time; bootstrap standard
    errors resample the paths.
    """
    times = np.asarray(sorted(times), dtype=float)
    if times.size == 0:
        raise DomainError("distance_curve needs at least one time")
    reference = as_sample(reference)
    grid = x.grid
    step_counts = [grid.steps_for(t, 't') for t in times]
    if min(step_counts) < 1:
        raise DomainError("times must be positive")

    path = em_simulate(model, x, max(step_counts), noise)
    distances, std_errors, heads = [], [], []
    for k in step_counts:
        sample = as_sample(path.segment_at(k))
        distances.append(empirical_coupling_distance(sample, reference, spec, max_samples))
        std_errors.append(_bootstrap_std(sample, reference, spec, n_boot, boot_seed + k))
        heads.append(sample.head)

    return DistanceCurve(
        times=times,
        distances=np.asarray(distances),
        std_errors=np.asarray(std_errors),
        n_paths=int(np.prod(path.batch_shape)),
        heads=heads,
    )


@dataclass(frozen=True)
class TransitionContraction:
    distance: float
    initial_distance: float
    ratio: float

    @property
    def contracting(self):
        return self.ratio < 1


def transition_contraction(model, x, y, h, spec, noise, max_samples=MAX_OT_SAMPLES):
    """Empirical W_d(P_x^h, P_y^h) / d(x, y) from independent batches started at x and y."""
    initial = spec(x, y)
    if initial == 0:
        raise DomainError("x and y coincide; the contraction ratio is undefined")
    steps = x.grid.steps_for(h, 'h')
    sample_x = em_simulate(model, x, steps, noise).terminal
    sample_y = em_simulate(model, y, steps, noise.with_tag(noise.stream_tag + '/y')).terminal
    distance = empirical_coupling_distance(sample_x, sample_y, spec, max_samples)
    return TransitionContraction(distance=distance, initial_distance=initial, ratio=distance / initial)


@dataclass(frozen=True)
class NormalFit:
    statistic: float
    p_value: float
    passes: bool


def normal_fit_check(values, variance, mean=0.0, significance=0.01):
    """Kolmogorov-Smirnov test of ``values`` against N(mean, variance)."""
    if not variance > 0:
        raise DomainError("variance must be positive, got {!r}".format(variance))
    values = np.ravel(np.asarray(values, dtype=float))
    if values.size == 0:
        raise DomainError("normal_fit_check needs at least one value")
    statistic, p_value = kstest(values, 'norm', args=(mean, math.sqrt(variance)))
    return NormalFit(statistic=float(statistic), p_value=float(p_value), passes=bool(p_value >= significance))
