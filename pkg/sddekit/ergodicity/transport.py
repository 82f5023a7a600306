"""Exact optimal transport between small empirical samples of segments."""
import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.sparse import eye as sparse_eye, kron, vstack

from ..core.grid import Segment
from ..errors import DomainError, EmptyBatchError, LipschitzViolationError, SampleSizeError


MAX_OT_SAMPLES = 512
LIPSCHITZ_TOLERANCE = 1e-12


def as_sample(sample):
    """A flat batched ``Segment`` from a list of segments or a batched segment."""
    if isinstance(sample, Segment):
        if not sample.batch_shape:
            return Segment(sample.values[None], sample.grid)
        return Segment(sample.values.reshape((-1,) + sample.values.shape[-2:]), sample.grid)
    sample = list(sample)
    if not sample:
        raise EmptyBatchError("an empirical sample needs at least one segment")
    return Segment.stack(sample)


def cost_matrix(sample_a, sample_b, spec):
    """d_{N,gamma} between every segment of ``sample_a`` and every segment of ``sample_b``."""
    if not sample_a.grid.same_segments(sample_b.grid) or sample_a.values.shape[-2:] != sample_b.values.shape[-2:]:
        raise DomainError("samples live on different segment grids")
    rows = [
        np.max(np.linalg.norm(sample_b.values - values, axis=-1), axis=-1)
        for values in sample_a.values
    ]
    return spec.from_distance(np.stack(rows))


def transport_value(cost):
    """Minimal expected cost between uniform marginals on the rows and columns of ``cost``."""
    n_a, n_b = cost.shape
    if n_a == n_b:
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].sum() / n_a)

    # plan variables are cost.ravel() ordered row-major
    row_sums = kron(sparse_eye(n_a), np.ones((1, n_b)))
    col_sums = kron(np.ones((1, n_a)), sparse_eye(n_b))
    result = linprog(
        cost.ravel(),
        A_eq=vstack([row_sums, col_sums]).tocsr(),
        b_eq=np.concatenate([np.full(n_a, 1 / n_a), np.full(n_b, 1 / n_b)]),
        bounds=(0, None),
        method='highs',
    )
    if not result.success:
        raise DomainError("transport problem failed: {}".format(result.message))
    return float(result.fun)


def empirical_coupling_distance(sample_a, sample_b, spec, max_samples=MAX_OT_SAMPLES):
    """Exact Kantorovich distance under d_{N,gamma} between two uniform empirical measures."""
    sample_a, sample_b = as_sample(sample_a), as_sample(sample_b)
    for label, sample in (('sample_a', sample_a), ('sample_b', sample_b)):
        if len(sample) > max_samples:
            raise SampleSizeError(
                "{} has {} segments, above the exact solver cap of {}; subsample it first".format(
                    label, len(sample), max_samples
                )
            )
    return transport_value(cost_matrix(sample_a, sample_b, spec))


def kr_dual_value(f, sample_a, sample_b, spec, tolerance=LIPSCHITZ_TOLERANCE):
    """|mean f(sample_a) - mean f(sample_b)| for a functional 1-Lipschitz w.r.t. d_{N,gamma}.

    ``f`` receives a batched ``Segment`` and returns one value per row. The
    Lipschitz property is checked on every pair drawn from both samples.
    """
    sample_a, sample_b = as_sample(sample_a), as_sample(sample_b)
    pooled = Segment(np.concatenate([sample_a.values, sample_b.values]), sample_a.grid)
    values = np.broadcast_to(np.asarray(f(pooled), dtype=float), (len(pooled),))

    excess = np.abs(values[:, None] - values[None, :]) - cost_matrix(pooled, pooled, spec)
    worst = np.unravel_index(int(np.argmax(excess)), excess.shape)
    if excess[worst] > tolerance:
        labels = ['sample_a[{}]'.format(i) for i in range(len(sample_a))]
        labels += ['sample_b[{}]'.format(i) for i in range(len(sample_b))]
        i, j = worst
        distance = cost_matrix(pooled[i:i + 1], pooled[j:j + 1], spec)[0, 0]
        ratio = abs(values[i] - values[j]) / distance if distance > 0 else float('inf')
        raise LipschitzViolationError((labels[i], labels[j]), ratio)

    n_a = len(sample_a)
    return float(abs(np.mean(values[:n_a]) - np.mean(values[n_a:])))
