from dataclasses import dataclass

import numpy as np

from ..core.grid import sup_dist
from ..errors import DomainError


@dataclass(frozen=True)
class MetricSpec:
    """The truncated Hölder metric d_{N,gamma}(x, y) = min(N ||x - y||^gamma, 1)."""

    N: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not self.N >= 1:
            raise DomainError("N must be at least 1, got {!r}".format(self.N))
        if not 0 < self.gamma <= 1:
            raise DomainError("gamma must lie in (0, 1], got {!r}".format(self.gamma))

    def from_distance(self, distance):
        value = np.minimum(self.N * np.asarray(distance, dtype=float) ** self.gamma, 1.0)
        return float(value) if value.ndim == 0 else value

    def __call__(self, x, y):
        return d_metric(x, y, self)


def d_metric(x, y, spec):
    return spec.from_distance(sup_dist(x, y))
