"""Built-in models.

Every class here is defined at module level so that instances pickle into
worker processes. Callbacks follow the ``SddeModel`` contract: raw segment
values (..., L+1, n) in, row-wise coefficients out.
"""
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core.model import SddeModel
from .errors import ConfigError, DomainError, UnknownModelError


def _now(x):
    return x[..., -1, :]


def _delayed(x):
    return x[..., 0, :]


def _sech2(v):
    return 1 / np.cosh(v) ** 2


class LinearDelayModel(SddeModel):
    """a(x) = -kappa0 x(0) - kappa1 x(-r), sigma = s I."""

    name = 'linear-delay'
    description = 'linear drift in the current and delayed state, constant diffusion'

    def __init__(self, kappa0=1.0, kappa1=0.5, s=1.0, dim=1):
        if s < 0:
            raise DomainError("s must be non-negative, got {!r}".format(s))
        self.kappa0 = float(kappa0)
        self.kappa1 = float(kappa1)
        self.s = float(s)
        self.dim_state = self.dim_noise = int(dim)
        self.holder_constant = max(1.0, abs(self.kappa0) + abs(self.kappa1), self.s * math.sqrt(dim))
        if self.s > 0:
            self.inverse_bound = math.sqrt(dim) / self.s
        else:
            # no inverse for the deterministic equation
            self.diffusion_right_inverse = None
        self.validate()

    def drift(self, x):
        return -self.kappa0 * _now(x) - self.kappa1 * _delayed(x)

    def diffusion(self, x):
        return self.s * np.eye(self.dim_state)

    def diffusion_right_inverse(self, x):
        return np.eye(self.dim_state) / self.s

    def drift_gradient(self, x, u):
        return -self.kappa0 * _now(u) - self.kappa1 * _delayed(u)

    def diffusion_gradient(self, x, u):
        return np.zeros((self.dim_state, self.dim_noise))


def _root_drift(v):
    return -np.sign(v) * np.sqrt(np.abs(v))


class HolderDriftModel(SddeModel):
    """a(x) = -sign(x(0)) |x(0)|^(1/2) + b tanh(x(-r)), sigma = s.

    The drift is one-sided 1/2-Hölder and not Lipschitz at the origin.
    """

    name = 'holder-drift'
    description = 'one-sided 1/2-Hölder drift plus a bounded delayed term, constant diffusion'
    holder_alpha = 0.5
    holder_beta = 1.0

    def __init__(self, b=0.5, s=1.0):
        if not s > 0:
            raise DomainError("s must be positive, got {!r}".format(s))
        self.b = float(b)
        self.s = float(s)
        self.holder_constant = max(1.0, abs(self.b), self.s)
        self.inverse_bound = 1 / self.s
        self.validate()

    def root_term(self, v):
        return _root_drift(v)

    def drift(self, x):
        return self.root_term(_now(x)) + self.b * np.tanh(_delayed(x))

    def diffusion(self, x):
        return np.full((1, 1), self.s)

    def diffusion_right_inverse(self, x):
        return np.full((1, 1), 1 / self.s)

    def mollify(self, eps):
        return MollifiedHolderDriftModel(eps, b=self.b, s=self.s)


class MollifiedHolderDriftModel(HolderDriftModel):
    """``holder-drift`` with the root replaced by the chord -v eps^(-1/2) on |v| <= eps.

    Lipschitz with constant eps^(-1/2); the sup gap to the root drift is eps^(1/2) / 4.
    """

    name = 'holder-drift-mollified'
    description = 'piecewise-linear mollification of holder-drift at scale eps'
    holder_alpha = 1.0

    def __init__(self, eps=0.01, b=0.5, s=1.0):
        if not eps > 0:
            raise DomainError("eps must be positive, got {!r}".format(eps))
        self.eps = float(eps)
        super().__init__(b=b, s=s)

    def root_term(self, v):
        return np.where(np.abs(v) <= self.eps, -v / math.sqrt(self.eps), _root_drift(v))

    def mollify(self, eps):
        return MollifiedHolderDriftModel(eps, b=self.b, s=self.s)


class TanhSmoothModel(SddeModel):
    """a(x) = -kappa x(0) + b tanh(x(-r)), sigma(x) = s0 + s1 tanh(x(-r)), s0 > s1 >= 0.

    Bounded, uniformly non-degenerate diffusion with bounded derivatives.
    """

    name = 'tanh-smooth'
    description = 'smooth saturated drift and diffusion with bounded derivatives'

    def __init__(self, kappa=1.0, b=0.5, s0=1.0, s1=0.25):
        if not s0 > abs(s1):
            raise DomainError("s0 must exceed |s1| for a non-degenerate diffusion")
        if kappa < 0:
            raise DomainError("kappa must be non-negative, got {!r}".format(kappa))
        self.kappa = float(kappa)
        self.b = float(b)
        self.s0 = float(s0)
        self.s1 = float(s1)
        self.holder_constant = max(1.0, abs(self.b), self.s0 + abs(self.s1))
        self.inverse_bound = 1 / (self.s0 - abs(self.s1))
        self.validate()

    def _sigma(self, x):
        return (self.s0 + self.s1 * np.tanh(_delayed(x)))[..., None]

    def drift(self, x):
        return -self.kappa * _now(x) + self.b * np.tanh(_delayed(x))

    def diffusion(self, x):
        return self._sigma(x)

    def diffusion_right_inverse(self, x):
        return 1 / self._sigma(x)

    def drift_gradient(self, x, u):
        return -self.kappa * _now(u) + self.b * _sech2(_delayed(x)) * _delayed(u)

    def diffusion_gradient(self, x, u):
        return (self.s1 * _sech2(_delayed(x)) * _delayed(u))[..., None]


class PropKappaModel(SddeModel):
    """a(x) = -A x(0) (1 + |x(0)|^2)^((kappa-1)/2) + b tanh(x(-r)), sigma = s.

    For large |x(0)| this gives (a(x), x(0)) ~ -A |x(0)|^(kappa+1), the drift
    shape the Lyapunov catalog is indexed by.
    """

    name = 'prop-kappa'
    description = 'drift with (a(x), x(0)) ~ -A |x(0)|^(kappa+1) at infinity, constant diffusion'

    def __init__(self, kappa=1.0, A=1.0, b=0.0, s=0.5):
        if kappa < -1:
            raise DomainError("kappa must be at least -1, got {!r}".format(kappa))
        if not A > 0 or not s > 0:
            raise DomainError("A and s must be positive")
        self.kappa = float(kappa)
        self.A = float(A)
        self.b = float(b)
        self.s = float(s)
        self.holder_constant = max(1.0, self.A + abs(self.b), self.s)
        self.inverse_bound = 1 / self.s
        self.validate()

    def drift(self, x):
        v = _now(x)
        return -self.A * v * (1 + v ** 2) ** ((self.kappa - 1) / 2) + self.b * np.tanh(_delayed(x))

    def diffusion(self, x):
        return np.full((1, 1), self.s)

    def diffusion_right_inverse(self, x):
        return np.full((1, 1), 1 / self.s)

    def drift_gradient(self, x, u):
        v = _now(x)
        slope = -self.A * (1 + v ** 2) ** ((self.kappa - 3) / 2) * (1 + self.kappa * v ** 2)
        return slope * _now(u) + self.b * _sech2(_delayed(x)) * _delayed(u)

    def diffusion_gradient(self, x, u):
        return np.zeros((1, 1))


class OuNoDelayModel(SddeModel):
    """a(x) = -theta x(0), sigma = s; the delay window is carried but never read."""

    name = 'ou-nodelay'
    description = 'Ornstein-Uhlenbeck process embedded as a delay equation'

    def __init__(self, theta=1.0, s=1.0):
        if not theta > 0 or not s > 0:
            raise DomainError("theta and s must be positive")
        self.theta = float(theta)
        self.s = float(s)
        self.holder_constant = max(1.0, self.s)
        self.inverse_bound = 1 / self.s
        self.validate()

    @property
    def stationary_variance(self):
        return self.s ** 2 / (2 * self.theta)

    def drift(self, x):
        return -self.theta * _now(x)

    def diffusion(self, x):
        return np.full((1, 1), self.s)

    def diffusion_right_inverse(self, x):
        return np.full((1, 1), 1 / self.s)

    def drift_gradient(self, x, u):
        return -self.theta * _now(u)

    def diffusion_gradient(self, x, u):
        return np.zeros((1, 1))


@dataclass(frozen=True)
class ModelCatalogEntry:
    id: str
    description: str
    constructor: Callable
    defaults: dict = field(default_factory=dict)

    def build(self, params=None):
        params = dict(params or {})
        unknown = sorted(set(params) - set(self.defaults))
        if unknown:
            raise ConfigError('model.params.{}'.format(unknown[0]), "not a parameter of {}".format(self.id))
        return self.constructor(**dict(self.defaults, **params))


CATALOG = OrderedDict((entry.id, entry) for entry in [
    ModelCatalogEntry(
        'linear-delay', LinearDelayModel.description, LinearDelayModel,
        {'kappa0': 1.0, 'kappa1': 0.5, 's': 1.0, 'dim': 1},
    ),
    ModelCatalogEntry(
        'holder-drift', HolderDriftModel.description, HolderDriftModel,
        {'b': 0.5, 's': 1.0},
    ),
    ModelCatalogEntry(
        'holder-drift-mollified', MollifiedHolderDriftModel.description, MollifiedHolderDriftModel,
        {'eps': 0.01, 'b': 0.5, 's': 1.0},
    ),
    ModelCatalogEntry(
        'tanh-smooth', TanhSmoothModel.description, TanhSmoothModel,
        {'kappa': 1.0, 'b': 0.5, 's0': 1.0, 's1': 0.25},
    ),
    ModelCatalogEntry(
        'prop-kappa', PropKappaModel.description, PropKappaModel,
        {'kappa': 1.0, 'A': 1.0, 'b': 0.0, 's': 0.5},
    ),
    ModelCatalogEntry(
        'ou-nodelay', OuNoDelayModel.description, OuNoDelayModel,
        {'theta': 1.0, 's': 1.0},
    ),
])


def get_entry(model_id):
    try:
        return CATALOG[model_id]
    except KeyError:
        raise UnknownModelError(model_id)


def build_model(model_id, params=None):
    return get_entry(model_id).build(params)


def list_models():
    """(id, description, alpha, beta) for every entry at its default parameters."""
    rows = []
    for entry in CATALOG.values():
        model = entry.build()
        rows.append((entry.id, entry.description, model.holder_alpha, model.holder_beta))
    return rows
