"""Rate functions Phi, Phi^-1, r = phi o Phi^-1 and the convergence envelope built from them."""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from ..errors import DomainError, RateFunctionError


QUAD_TOLERANCE = 1e-10
ROOT_TOLERANCE = 1e-12
# ln v beyond this overflows float64
MAX_LOG_V = 700.0

PHI_PROBES = np.geomspace(1.0, 1e6, 64)


class NumericPhiIntegral:
    """Phi(v) = int_1^v dw / phi(w) by adaptive quadrature in s = ln w, inverted by bracketing."""

    def __init__(self, phi):
        self.phi = phi

    def _scalar(self, v):
        if v < 1:
            raise DomainError("Phi is defined for v >= 1, got {!r}".format(v))
        value, _ = quad(
            lambda s: math.exp(s) / float(self.phi(math.exp(s))),
            0.0, math.log(v), epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200,
        )
        return value

    def _scalar_inverse(self, t):
        if t < 0:
            raise DomainError("Phi^-1 is defined for t >= 0, got {!r}".format(t))
        if t == 0:
            return 1.0
        upper = 1.0
        while self._scalar(math.exp(upper)) < t:
            upper *= 2
            if upper > MAX_LOG_V:
                raise RateFunctionError("Phi stays below t = {!r} on the representable range".format(t))
        s = brentq(
            lambda s: self._scalar(math.exp(s)) - t, 0.0, upper, xtol=ROOT_TOLERANCE, rtol=4 * np.finfo(float).eps
        )
        return math.exp(s)

    def __call__(self, v):
        return _vectorized(self._scalar, v)

    def inverse(self, t):
        return _vectorized(self._scalar_inverse, t)


def _vectorized(fn, x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return fn(float(x))
    return np.vectorize(fn, otypes=[float])(x)


@dataclass(frozen=True)
class RateFunctions:
    phi: Callable
    Phi: Callable
    Phi_inv: Callable
    closed_form: bool

    def r(self, t):
        return self.phi(self.Phi_inv(t))


def rate_functions(phi):
    """Phi, its inverse and r for ``phi``; closed forms are used when ``phi`` provides them."""
    values = np.asarray([phi(v) for v in PHI_PROBES], dtype=float)
    if not np.all(values > 0):
        raise RateFunctionError("phi must be positive on [1, inf), got {!r} at v = {!r}".format(
            float(np.min(values)), float(PHI_PROBES[int(np.argmin(values))])
        ))
    if np.any(np.diff(values) < 0):
        raise RateFunctionError("phi must be non-decreasing on [1, inf)")

    if hasattr(phi, 'integral') and hasattr(phi, 'integral_inverse'):
        return RateFunctions(phi, phi.integral, phi.integral_inverse, closed_form=True)
    numeric = NumericPhiIntegral(phi)
    return RateFunctions(phi, numeric, numeric.inverse, closed_form=False)


def _check_envelope_args(delta, c, C):
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1), got {!r}".format(delta))
    if not c > 0 or not C > 0:
        raise DomainError("c and C must be positive, got c={!r} C={!r}".format(c, C))


def rate_bound(t, V_x, phi, delta, c, C, rates=None):
    """C phi(V_x)^delta / r(c t)^delta."""
    _check_envelope_args(delta, c, C)
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be non-negative")
    if not V_x >= 1:
        raise DomainError("V_x must be at least 1, got {!r}".format(V_x))
    rates = rates or rate_functions(phi)
    value = C * float(phi(V_x)) ** delta / rates.r(c * np.asarray(t, dtype=float)) ** delta
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class RateEnvelope:
    c: float
    C: float
    delta: float

    def __call__(self, t, V_x, phi, rates=None):
        return rate_bound(t, V_x, phi, self.delta, self.c, self.C, rates)


def fit_rate_envelope(times, distances, V_x, phi, delta, c_grid=None):
    """Pick (c, C) so the envelope dominates every observed distance and hugs it in log scale.

    For each c on the grid the smallest dominating C is taken; the c with the
    smallest summed log gap wins. The constants are fitted, not certified.
    """
    times = np.asarray(times, dtype=float)
    distances = np.asarray(distances, dtype=float)
    if times.shape != distances.shape or times.size == 0:
        raise DomainError("times and distances must be non-empty and of equal length")
    positive = distances > 0
    if not np.any(positive):
        raise DomainError("no positive distance to fit an envelope to")
    if c_grid is None:
        c_grid = np.geomspace(1e-3, 1e2, 256)

    rates = rate_functions(phi)
    scale = float(phi(V_x)) ** delta
    best = None
    with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
        for c in c_grid:
            decay = rates.r(c * times[positive]) ** -delta
            C = float(np.max(distances[positive] / (scale * decay)))
            gap = float(np.sum(np.log(C * scale * decay) - np.log(distances[positive])))
            if not (math.isfinite(gap) and math.isfinite(C)):
                continue
            if best is None or gap < best[0]:
                best = (gap, float(c), C)

    if best is None:
        raise DomainError("no envelope on the c grid dominates the observed distances")
    _, c, C = best
    return RateEnvelope(c=c, C=C, delta=delta)
