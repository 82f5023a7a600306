import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError, MissingCapabilityError
from ..seeds import path_generator
from .grid import Segment, sup_dist


logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-10


class SddeModel:
    """Coefficients of dX = a(X_t) dt + sigma(X_t) dW.

    Callbacks receive raw segment values of shape (..., L+1, n), oldest point
    first, and must act row-wise on any leading batch axes:

    - ``drift(x)`` -> (..., n)
    - ``diffusion(x)`` -> (..., n, m)
    - ``diffusion_right_inverse(x)`` -> (..., m, n), optional
    - ``drift_gradient(x, u)`` -> (..., n), the derivative of a at x along u, optional
    - ``diffusion_gradient(x, u)`` -> (..., n, m), optional

    Outputs that do not depend on the batch may omit the batch axes. Callbacks
    must not keep mutable state; batches run on several workers at once.
    """

    name = 'model'
    description = ''

    dim_state = 1
    dim_noise = 1

    holder_alpha = 1.0
    holder_beta = 1.0
    holder_constant = 1.0
    # declared sup of the Frobenius norm of sigma^{-1}, None when unknown
    inverse_bound = None

    diffusion_right_inverse = None
    drift_gradient = None
    diffusion_gradient = None

    def drift(self, x):
        raise NotImplementedError

    def diffusion(self, x):
        raise NotImplementedError

    @property
    def has_right_inverse(self):
        return self.diffusion_right_inverse is not None

    @property
    def has_gradients(self):
        return self.drift_gradient is not None and self.diffusion_gradient is not None

    def require_right_inverse(self):
        if not self.has_right_inverse:
            raise MissingCapabilityError('diffusion_right_inverse', self)

    def require_gradients(self):
        if not self.has_gradients:
            raise MissingCapabilityError('drift_gradient and diffusion_gradient', self)

    def validate(self):
        if not self.holder_alpha > 0 or self.holder_alpha > 1:
            raise DomainError("holder_alpha must lie in (0, 1], got {!r}".format(self.holder_alpha))
        if not 0.5 < self.holder_beta <= 1:
            raise DomainError("holder_beta must lie in (1/2, 1], got {!r}".format(self.holder_beta))
        if not self.holder_constant > 0:
            raise DomainError("holder_constant must be positive, got {!r}".format(self.holder_constant))
        if self.dim_state < 1 or self.dim_noise < 1:
            raise DomainError("state and noise dimensions must be positive")
        return self

    def __repr__(self):
        return "<{} {!r} n={} m={}>".format(type(self).__name__, self.name, self.dim_state, self.dim_noise)


class CallbackModel(SddeModel):
    """A model assembled from user callables following the SddeModel contract."""

    def __init__(self, drift, diffusion, dim_state=1, dim_noise=1, diffusion_right_inverse=None,
                 drift_gradient=None, diffusion_gradient=None, holder_alpha=1.0, holder_beta=1.0,
                 holder_constant=1.0, inverse_bound=None, name='callback', description=''):
        self.drift = drift
        self.diffusion = diffusion
        self.diffusion_right_inverse = diffusion_right_inverse
        self.drift_gradient = drift_gradient
        self.diffusion_gradient = diffusion_gradient
        self.dim_state = dim_state
        self.dim_noise = dim_noise
        self.holder_alpha = holder_alpha
        self.holder_beta = holder_beta
        self.holder_constant = holder_constant
        self.inverse_bound = inverse_bound
        self.name = name
        self.description = description
        self.validate()


def eval_drift(model, x):
    return np.broadcast_to(np.asarray(model.drift(x), dtype=float), x.shape[:-2] + (model.dim_state,))


def eval_diffusion(model, x):
    return np.broadcast_to(
        np.asarray(model.diffusion(x), dtype=float), x.shape[:-2] + (model.dim_state, model.dim_noise)
    )


def eval_right_inverse(model, x):
    model.require_right_inverse()
    return np.broadcast_to(
        np.asarray(model.diffusion_right_inverse(x), dtype=float),
        x.shape[:-2] + (model.dim_noise, model.dim_state),
    )


def matvec(matrix, vector):
    """Row-wise matrix-vector product without BLAS, so results do not depend on batch size."""
    return np.sum(matrix * vector[..., None, :], axis=-1)


@dataclass
class AssumptionReport:
    n_pairs: int
    holder_pairs: int
    h1_violations: int
    h2_violations: int
    h3_violations: Optional[int]
    h4_violations: int
    sigma_growth_violations: int
    worst_h1_ratio: float
    worst_h2_ratio: float

    @property
    def total_violations(self):
        return (self.h1_violations + self.h2_violations + (self.h3_violations or 0)
                + self.h4_violations + self.sigma_growth_violations)

    @property
    def ok(self):
        return self.total_violations == 0


def standard_probe_cloud(grid, dim=1, n_pairs=64, seed=0):
    """Deterministic probe pairs (x, y) with ||x - y|| spread over [1e-6, 1].

    Half the pairs sit close to the origin, where Hölder-only coefficients
    are least regular.
    """
    rng = path_generator(seed, 0, 'probe-cloud')
    length = grid.segment_length

    walk = np.cumsum(rng.standard_normal((n_pairs, length, dim)) * np.sqrt(grid.dt), axis=1)
    level = rng.standard_normal((n_pairs, 1, dim)) * 2.0
    scale = np.where(np.arange(n_pairs) % 2 == 0, 1.0, 10.0 ** rng.uniform(-4, -1, n_pairs))
    x = (level + walk) * scale[:, None, None]

    direction = rng.standard_normal((n_pairs, length, dim))
    direction /= np.max(np.linalg.norm(direction, axis=-1), axis=-1)[:, None, None]
    distance = 10.0 ** rng.uniform(-6, 0, n_pairs)
    y = x + direction * distance[:, None, None]

    return Segment(x, grid), Segment(y, grid)


def verify_assumptions(model, probes):
    """Count empirical violations of the Hölder, non-degeneracy and growth conditions.

    Advisory only: the declared (alpha, beta, C) metadata is probed on the
    supplied pairs and the counts are reported, never raised.
    """
    x, y = probes
    xv, yv = x.values, y.values
    C, alpha, beta = model.holder_constant, model.holder_alpha, model.holder_beta
    dist = np.atleast_1d(sup_dist(x, y))
    holder = (dist > 0) & (dist <= 1)

    ax, ay = eval_drift(model, xv), eval_drift(model, yv)
    sx, sy = eval_diffusion(model, xv), eval_diffusion(model, yv)

    h1_lhs = np.sum((ax - ay) * (x.head - y.head), axis=-1)
    h1_rhs = C * dist ** (alpha + 1)
    h1_bad = holder & (h1_lhs > h1_rhs * (1 + 1e-9) + 1e-15)

    h2_lhs = np.linalg.norm(sx - sy, axis=(-2, -1))
    h2_rhs = C * dist ** beta
    h2_bad = holder & (h2_lhs > h2_rhs * (1 + 1e-9) + 1e-15)

    h3_violations = None
    if model.has_right_inverse:
        h3_violations = 0
        identity = np.eye(model.dim_state)
        for values, sigma in ((xv, sx), (yv, sy)):
            inverse = eval_right_inverse(model, values)
            product = np.sum(sigma[..., :, :, None] * inverse[..., None, :, :], axis=-2)
            residual = np.max(np.abs(product - identity), axis=(-2, -1))
            bad = residual > IDENTITY_TOLERANCE
            if model.inverse_bound is not None:
                bad |= np.linalg.norm(inverse, axis=(-2, -1)) > model.inverse_bound * (1 + 1e-12)
            h3_violations += int(np.count_nonzero(bad))

    h4_violations = 0
    growth_violations = 0
    for seg, a, sigma in ((x, ax, sx), (y, ay, sy)):
        norm = np.atleast_1d(seg.norm())
        h4_violations += int(np.count_nonzero(np.sum(a * seg.head, axis=-1) > C * (1 + norm ** 2) + 1e-12))
        growth_violations += int(np.count_nonzero(
            np.linalg.norm(sigma, axis=(-2, -1)) > C * (1 + norm) + 1e-12
        ))

    with np.errstate(divide='ignore', invalid='ignore'):
        h1_ratio = np.where(holder, h1_lhs / np.where(holder, dist ** (alpha + 1), 1), -np.inf)
        h2_ratio = np.where(holder, h2_lhs / np.where(holder, dist ** beta, 1), -np.inf)

    report = AssumptionReport(
        n_pairs=int(dist.size),
        holder_pairs=int(np.count_nonzero(holder)),
        h1_violations=int(np.count_nonzero(h1_bad)),
        h2_violations=int(np.count_nonzero(h2_bad)),
        h3_violations=h3_violations,
        h4_violations=h4_violations,
        sigma_growth_violations=growth_violations,
        worst_h1_ratio=float(np.max(h1_ratio)) if dist.size else float('-inf'),
        worst_h2_ratio=float(np.max(h2_ratio)) if dist.size else float('-inf'),
    )

    if not report.ok:
        logger.warning(
            "{code}: model {model} violates its declared constants on {violations} probes",
            extra={
                'code': 'assumptions.violations',
                'model': model.name,
                'violations': report.total_violations,
            }
        )
    return report
