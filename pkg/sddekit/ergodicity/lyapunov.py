"""Lyapunov functions V, concave rates phi and the Monte Carlo drift check."""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from ..core.integrator import em_simulate
from ..core.noise import BrownianNoise
from ..errors import DomainError, LyapunovValueError
from .transport import as_sample


logger = logging.getLogger(__name__)

# two-sided 95% normal quantile
CI_Z = 1.96


class PowerPhi:
    """phi(v) = a v^exponent, exponent <= 1; exponent 1 is the linear case."""

    def __init__(self, a, exponent=1.0):
        if not a > 0:
            raise DomainError("phi scale must be positive, got {!r}".format(a))
        if exponent > 1:
            raise DomainError("phi must be concave, exponent {!r} exceeds 1".format(exponent))
        self.a = float(a)
        self.exponent = float(exponent)

    def __call__(self, v):
        return self.a * np.asarray(v, dtype=float) ** self.exponent

    def integral(self, v):
        """Phi(v) = int_1^v dw / phi(w)."""
        v = np.asarray(v, dtype=float)
        if self.exponent == 1:
            return np.log(v) / self.a
        power = 1 - self.exponent
        return (v ** power - 1) / (self.a * power)

    def integral_inverse(self, t):
        t = np.asarray(t, dtype=float)
        if self.exponent == 1:
            return np.exp(self.a * t)
        power = 1 - self.exponent
        return (1 + self.a * power * t) ** (1 / power)

    def __repr__(self):
        return "PowerPhi(a={}, exponent={})".format(self.a, self.exponent)


class LogCorrectedPhi:
    """phi(v) = c v (ln v + b)^q with b > 0."""

    def __init__(self, c, b, q):
        if not c > 0 or not b > 0:
            raise DomainError("c and b must be positive, got c={!r} b={!r}".format(c, b))
        self.c = float(c)
        self.b = float(b)
        self.q = float(q)

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        return self.c * v * (np.log(v) + self.b) ** self.q

    def integral(self, v):
        u = np.log(np.asarray(v, dtype=float)) + self.b
        if self.q == 1:
            return np.log(u / self.b) / self.c
        power = 1 - self.q
        return (u ** power - self.b ** power) / (self.c * power)

    def integral_inverse(self, t):
        t = np.asarray(t, dtype=float)
        if self.q == 1:
            u = self.b * np.exp(self.c * t)
        else:
            power = 1 - self.q
            u = (self.b ** power + self.c * power * t) ** (1 / power)
        return np.exp(u - self.b)

    def __repr__(self):
        return "LogCorrectedPhi(c={}, b={}, q={})".format(self.c, self.b, self.q)


class ExponentialV:
    """V(x) = exp(alpha |x(0)|^power)."""

    def __init__(self, alpha, power=1.0):
        self.alpha = float(alpha)
        self.power = float(power)

    def __call__(self, values):
        return np.exp(self.alpha * np.linalg.norm(values[..., -1, :], axis=-1) ** self.power)


class PolynomialV:
    """V(x) = 1 + |x(0)|^p."""

    def __init__(self, p):
        self.p = float(p)

    def __call__(self, values):
        return 1 + np.linalg.norm(values[..., -1, :], axis=-1) ** self.p


@dataclass(frozen=True)
class LyapunovSpec:
    """E_x V(X_h) - V(x) <= -phi(V(x)) + C_V; ``V`` acts on raw segment values."""

    V: Callable
    phi: Callable
    C_V: float
    h: float
    case: str = 'custom'

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("h must be positive, got {!r}".format(self.h))


def lyapunov_catalog(kappa, h, C_V, alpha=1.0, c=1.0, b=None, p=None, a=1.0, A=None, sigma_bound_sq=None):
    """The (V, phi) shapes for a drift with (a(x), x(0)) <= -A |x(0)|^(kappa+1) and bounded sigma.

    kappa >= 0 gives V = e^(alpha |x(0)|), phi = c v; kappa in (-1, 0) gives
    V = e^(alpha |x(0)|^(kappa+1)), phi = c v (ln v + b)^(2 kappa / (kappa+1));
    kappa = -1 needs 2A > sup ||sigma||^2 and gives V = 1 + |x(0)|^p,
    phi = a v^(1 - 2/p) for 2 < p < 2 + (2A - sup ||sigma||^2) / sup ||sigma||^2.
    """
    if kappa < -1:
        raise DomainError("kappa must be at least -1, got {!r}".format(kappa))

    if kappa >= 0:
        return LyapunovSpec(ExponentialV(alpha), PowerPhi(c, 1.0), C_V, h, case='i')

    if kappa > -1:
        q = 2 * kappa / (kappa + 1)
        if b is None:
            # phi is non-decreasing on [1, inf) once b >= -q
            b = max(1.0, -q)
        return LyapunovSpec(ExponentialV(alpha, kappa + 1), LogCorrectedPhi(c, b, q), C_V, h, case='ii')

    if A is None or sigma_bound_sq is None or p is None:
        raise DomainError("kappa = -1 needs A, sigma_bound_sq and p")
    if not sigma_bound_sq > 0:
        raise DomainError("sigma_bound_sq must be positive, got {!r}".format(sigma_bound_sq))
    if not 2 * A > sigma_bound_sq:
        raise DomainError("kappa = -1 needs 2A > sup ||sigma||^2, got A={!r}".format(A))
    p_max = p_upper_limit(A, sigma_bound_sq)
    if not 2 < p < p_max:
        raise DomainError("p = {!r} outside the admissible range (2, {!r})".format(p, p_max))
    return LyapunovSpec(PolynomialV(p), PowerPhi(a, 1 - 2 / p), C_V, h, case='iii')


def p_upper_limit(A, sigma_bound_sq):
    return 2 + (2 * A - sigma_bound_sq) / sigma_bound_sq


@dataclass(frozen=True)
class LyapunovProbeResult:
    probe: int
    V_x: float
    drift: float
    ci_halfwidth: float
    bound: float
    passes: bool


@dataclass(frozen=True)
class LyapunovReport:
    results: List[LyapunovProbeResult]
    n_paths: int

    @property
    def all_pass(self):
        return all(result.passes for result in self.results)


def _evaluate_V(spec, values, where):
    v = np.asarray(spec.V(values), dtype=float)
    if np.any(v < 1) or not np.all(np.isfinite(v)):
        raise LyapunovValueError("V must be finite and at least 1, got {!r} at {}".format(
            float(np.min(v)), where
        ))
    return v


def lyapunov_drift_check(model, spec, probe_points, n_paths, master_seed=0):
    """Estimate E_x V(X_h) - V(x) with a 95% CI at each probe and compare to -phi(V(x)) + C_V."""
    if n_paths < 2:
        raise DomainError("the drift check needs at least 2 paths per probe")
    probes = as_sample(probe_points)
    steps = probes.grid.steps_for(spec.h, 'h')

    results = []
    for i, probe in enumerate(probes):
        v_x = float(_evaluate_V(spec, probe.values, 'probe {}'.format(i)))
        noise = BrownianNoise.paths(master_seed, n_paths, stream_tag='lyapunov-{}'.format(i))
        path = em_simulate(model, probe, steps, noise)
        v_h = _evaluate_V(spec, path.terminal.values, 'probe {} at h'.format(i))

        drift = float(np.mean(v_h)) - v_x
        halfwidth = CI_Z * float(np.std(v_h, ddof=1)) / math.sqrt(n_paths)
        bound = -float(spec.phi(v_x)) + spec.C_V
        results.append(LyapunovProbeResult(
            probe=i,
            V_x=v_x,
            drift=drift,
            ci_halfwidth=halfwidth,
            bound=bound,
            passes=drift + halfwidth <= bound,
        ))

    report = LyapunovReport(results, n_paths)
    if not report.all_pass:
        logger.info(
            "{code}: drift condition not confirmed at {failures} of {probes} probes",
            extra={
                'code': 'lyapunov.check-failed',
                'failures': sum(not result.passes for result in results),
                'probes': len(results),
            }
        )
    return report
