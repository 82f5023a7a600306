"""Euler–Maruyama for the segment process.

Strong order 0.5 is the only scheme: a Milstein correction would need
derivatives of sigma along segments, which Hölder coefficients do not have.
"""
import numpy as np

from ..errors import DomainError, GridMismatchError, NonFiniteStateError
from .grid import PathGrid, Segment
from .model import eval_diffusion, eval_drift, matvec
from .noise import resolve_increments


def em_step(model, seg, dW, dt, extra_drift=0.0):
    """seg(0) + [a(seg) + extra_drift] dt + sigma(seg) dW, row-wise over batches."""
    if isinstance(seg, Segment):
        if seg.grid.dt != dt:
            raise GridMismatchError("step dt {!r} differs from the segment grid dt {!r}".format(dt, seg.grid.dt))
        values = seg.values
    else:
        values = np.asarray(seg, dtype=float)

    drift = eval_drift(model, values)
    sigma = eval_diffusion(model, values)
    if not (np.all(np.isfinite(drift)) and np.all(np.isfinite(sigma))):
        raise NonFiniteStateError(
            "model {!r} returned a non-finite coefficient".format(model.name), segment=seg
        )

    return values[..., -1, :] + (drift + extra_drift) * dt + matvec(sigma, np.asarray(dW, dtype=float))


def em_simulate(model, init, steps, noise, control=None):
    """Iterate ``em_step`` from ``init`` and keep every increment for replay.

    ``noise`` is a ``BrownianNoise`` or an array of recorded increments of
    shape (..., steps, m). ``control(k, window)``, when given, returns the
    extra drift applied on step ``k`` from the current window of states.
    """
    if steps < 1:
        raise DomainError("steps must be at least 1, got {!r}".format(steps))
    if init.dim != model.dim_state:
        raise DomainError("initial segment has dimension {}, model expects {}".format(init.dim, model.dim_state))

    grid = init.grid
    dt = grid.dt
    length = grid.segment_length
    increments = resolve_increments(noise, steps, model.dim_noise, dt)
    batch_shape = np.broadcast_shapes(init.batch_shape, increments.shape[:-2])

    states = np.empty(batch_shape + (length + steps, model.dim_state))
    states[..., :length, :] = np.broadcast_to(init.values, batch_shape + init.values.shape[-2:])
    increments = np.broadcast_to(increments, batch_shape + increments.shape[-2:])

    for k in range(steps):
        window = states[..., k:k + length, :]
        extra = 0.0 if control is None else control(k, window)
        try:
            states[..., k + length, :] = em_step(model, window, increments[..., k, :], dt, extra)
        except NonFiniteStateError as exc:
            exc.step = k
            exc.segment = Segment(window.copy(), grid)
            raise

    return PathGrid(states, increments.copy(), grid.with_horizon_steps(steps))


def replay(model, path, control=None):
    """Re-run a stored path from its initial segment and recorded increments."""
    return em_simulate(model, path.initial, path.steps, path.noise_increments, control=control)
