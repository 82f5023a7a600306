"""Change-of-measure bookkeeping along controlled paths.

The ledger integrates a predictable drift shift beta on the simulation grid
(left-endpoint sums, matching Euler–Maruyama):

    kl_half_integral  = 1/2 sum |beta_k|^2 dt
    log_exponent      = sum beta_k . dW_k - 1/2 sum |beta_k|^2 dt

For piecewise-constant beta the first sum is the KL divergence between the
shifted and unshifted noise laws on the horizon; exp(log_exponent) is the
Girsanov density.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import DomainError, NonFiniteControlError, WeightOverflowError


# exp overflows float64 beyond this
MAX_LOG_WEIGHT = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class GirsanovLedger:
    kl_half_integral: np.ndarray
    log_exponent: np.ndarray
    t_elapsed: float = 0.0

    @classmethod
    def empty(cls, batch_shape=()):
        return cls(np.zeros(batch_shape), np.zeros(batch_shape), 0.0)

    @property
    def kl(self):
        return self.kl_half_integral

    @property
    def tv_bound(self):
        return pinsker_tv_bound(self.kl_half_integral)

    def __getitem__(self, index):
        return GirsanovLedger(self.kl_half_integral[index], self.log_exponent[index], self.t_elapsed)

    @classmethod
    def concatenate(cls, ledgers):
        ledgers = list(ledgers)
        return cls(
            np.concatenate([np.atleast_1d(ledger.kl_half_integral) for ledger in ledgers]),
            np.concatenate([np.atleast_1d(ledger.log_exponent) for ledger in ledgers]),
            ledgers[0].t_elapsed,
        )


def accumulate(ledger, eta, dW, dt):
    """Add one grid step of the shift ``eta`` (shape (..., m)) to the ledger."""
    if not dt > 0:
        raise DomainError("dt must be positive, got {!r}".format(dt))
    eta = np.asarray(eta, dtype=float)
    if not np.all(np.isfinite(eta)):
        raise NonFiniteControlError("non-finite Girsanov shift at t = {!r}".format(ledger.t_elapsed))

    energy = 0.5 * np.sum(eta * eta, axis=-1) * dt
    return GirsanovLedger(
        ledger.kl_half_integral + energy,
        ledger.log_exponent + np.sum(eta * np.asarray(dW, dtype=float), axis=-1) - energy,
        ledger.t_elapsed + dt,
    )


def pinsker_tv_bound(kl):
    """sqrt(kl / 2), an upper bound on total variation."""
    kl = np.asarray(kl, dtype=float)
    if np.any(kl < 0):
        raise DomainError("KL divergence must be non-negative, got {!r}".format(kl))
    bound = np.sqrt(kl / 2)
    return float(bound) if bound.ndim == 0 else bound


def diff_lower_bound(mu_A, kl, N):
    """mu_A / N - (kl + ln 2) / (N ln N), a lower bound on nu(A).

    Returned raw; it may be negative and clamping is left to the caller.
    """
    if not N > 1:
        raise DomainError("N must exceed 1, got {!r}".format(N))
    if not 0 <= mu_A <= 1:
        raise DomainError("mu_A must be a probability, got {!r}".format(mu_A))
    if kl < 0:
        raise DomainError("KL divergence must be non-negative, got {!r}".format(kl))
    return mu_A / N - (kl + math.log(2)) / (N * math.log(N))


def best_lower_bound(mu_A, kl, log_n_grid=None):
    """Maximise ``diff_lower_bound`` over a grid of ln N.

    Evaluated in log space so that very large N do not overflow; returns
    ``(value, log_N)``.
    """
    if log_n_grid is None:
        log_n_grid = np.geomspace(1e-3, 700.0, 4096)
    log_n = np.asarray(log_n_grid, dtype=float)
    if np.any(log_n <= 0):
        raise DomainError("every ln N must be positive")
    if not 0 <= mu_A <= 1 or kl < 0:
        raise DomainError("mu_A must be a probability and kl non-negative")

    values = np.exp(-log_n) * (mu_A - (kl + math.log(2)) / log_n)
    best = int(np.argmax(values))
    return float(values[best]), float(log_n[best])


def importance_weight(ledger):
    """exp(log_exponent), the Girsanov density accumulated so far."""
    exponent = np.asarray(ledger.log_exponent, dtype=float)
    if np.any(exponent > MAX_LOG_WEIGHT):
        raise WeightOverflowError(float(np.max(exponent)))
    weight = np.exp(exponent)
    return float(weight) if weight.ndim == 0 else weight


def gaussian_shift_tv(beta, T):
    """Exact TV between N(0, T) and N(beta T, T), i.e. 2 Phi(|beta| sqrt(T) / 2) - 1."""
    if T <= 0:
        raise DomainError("T must be positive, got {!r}".format(T))
    return float(2 * norm.cdf(abs(beta) * math.sqrt(T) / 2) - 1)
