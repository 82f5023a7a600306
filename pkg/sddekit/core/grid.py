"""Time grids, segments and stored paths.

Arrays may carry leading batch axes; a batched ``Segment`` or ``PathGrid``
holds independent paths and every operation acts row-wise on them.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, GridAlignmentError, GridMismatchError


ALIGNMENT_TOLERANCE = 1e-9


def steps_of(duration, dt, name='duration'):
    """Number of grid steps in ``duration``; it must be an exact multiple of ``dt``."""
    if not math.isfinite(duration) or duration < 0:
        raise GridAlignmentError("{} must be a non-negative finite time, got {!r}".format(name, duration))
    steps = int(round(duration / dt))
    if abs(steps * dt - duration) > ALIGNMENT_TOLERANCE * max(1.0, abs(duration)):
        raise GridAlignmentError(
            "{} = {!r} is not an integer multiple of dt = {!r}".format(name, duration, dt)
        )
    return steps


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    delay_steps: int
    horizon_steps: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise DomainError("dt must be positive, got {!r}".format(self.dt))
        if int(self.delay_steps) != self.delay_steps or self.delay_steps < 1:
            raise DomainError("delay_steps must be a positive integer, got {!r}".format(self.delay_steps))
        if int(self.horizon_steps) != self.horizon_steps or self.horizon_steps < 1:
            raise DomainError("horizon_steps must be at least 1, got {!r}".format(self.horizon_steps))

    @classmethod
    def from_durations(cls, dt, r, horizon=None):
        delay_steps = steps_of(r, dt, 'r')
        horizon_steps = steps_of(horizon, dt, 'horizon') if horizon is not None else 1
        return cls(float(dt), delay_steps, horizon_steps)

    @property
    def r(self):
        return self.delay_steps * self.dt

    @property
    def horizon(self):
        return self.horizon_steps * self.dt

    @property
    def segment_length(self):
        return self.delay_steps + 1

    def steps_for(self, duration, name='duration'):
        return steps_of(duration, self.dt, name)

    def with_horizon_steps(self, horizon_steps):
        return TimeGrid(self.dt, self.delay_steps, horizon_steps)

    def segment_times(self):
        return (np.arange(self.segment_length) - self.delay_steps) * self.dt

    def path_times(self, steps=None):
        steps = self.horizon_steps if steps is None else steps
        return (np.arange(self.segment_length + steps) - self.delay_steps) * self.dt

    def same_segments(self, other):
        return self.dt == other.dt and self.delay_steps == other.delay_steps


@dataclass(frozen=True, eq=False)
class Segment:
    """A function on [-r, 0] sampled at the L+1 grid points, oldest first."""

    values: np.ndarray
    grid: TimeGrid

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim < 2 or values.shape[-2] != self.grid.segment_length:
            raise GridMismatchError(
                "segment values of shape {} do not fit a grid with {} points".format(
                    values.shape, self.grid.segment_length
                )
            )
        object.__setattr__(self, 'values', values)

    @classmethod
    def constant(cls, grid, value, dim=None):
        value = np.atleast_1d(np.asarray(value, dtype=float))
        if dim is not None and value.shape != (dim,):
            value = np.full(dim, float(value.reshape(-1)[0]))
        return cls(np.tile(value, (grid.segment_length, 1)), grid)

    @classmethod
    def from_function(cls, grid, fn):
        """Sample ``fn(t)`` at the segment times; scalar outputs become a 1-d state."""
        sampled = np.asarray(fn(grid.segment_times()), dtype=float)
        if sampled.ndim == 1:
            sampled = sampled[:, None]
        return cls(sampled, grid)

    @classmethod
    def stack(cls, segments):
        segments = list(segments)
        if not segments:
            raise DomainError("cannot stack an empty list of segments")
        grid = segments[0].grid
        for seg in segments[1:]:
            _check_grids(segments[0], seg)
        return cls(np.stack([seg.values for seg in segments]), grid)

    @property
    def dim(self):
        return self.values.shape[-1]

    @property
    def batch_shape(self):
        return self.values.shape[:-2]

    @property
    def head(self):
        """The current state x(0)."""
        return self.values[..., -1, :]

    @property
    def tail(self):
        """The delayed state x(-r)."""
        return self.values[..., 0, :]

    def norm(self):
        return _reduce(np.max(np.linalg.norm(self.values, axis=-1), axis=-1))

    def broadcast_to(self, batch_shape):
        shape = tuple(batch_shape) + self.values.shape[-2:]
        return Segment(np.broadcast_to(self.values, shape).copy(), self.grid)

    def __len__(self):
        if not self.batch_shape:
            raise TypeError("an unbatched segment has no length")
        return self.batch_shape[0]

    def __getitem__(self, index):
        if not self.batch_shape:
            raise TypeError("an unbatched segment cannot be indexed")
        return Segment(self.values[index], self.grid)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __add__(self, other):
        if isinstance(other, Segment):
            _check_grids(self, other)
            other = other.values
        return Segment(self.values + other, self.grid)

    def __sub__(self, other):
        if isinstance(other, Segment):
            _check_grids(self, other)
            other = other.values
        return Segment(self.values - other, self.grid)

    def __mul__(self, scalar):
        return Segment(self.values * scalar, self.grid)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PathGrid:
    """States from -r to the horizon plus the increments that produced them.

    ``states`` has shape (..., L+1+K, n) and ``noise_increments`` (..., K, m).
    """

    states: np.ndarray
    noise_increments: np.ndarray
    grid: TimeGrid

    @property
    def steps(self):
        return self.states.shape[-2] - self.grid.segment_length

    @property
    def batch_shape(self):
        return self.states.shape[:-2]

    @property
    def initial(self):
        return self.segment_at(0)

    @property
    def terminal(self):
        return self.segment_at(self.steps)

    def times(self):
        return self.grid.path_times(self.steps)

    def segment_at(self, k):
        return segment_at(self, k)

    def __len__(self):
        if not self.batch_shape:
            raise TypeError("an unbatched path has no length")
        return self.batch_shape[0]

    def __getitem__(self, index):
        if not self.batch_shape:
            raise TypeError("an unbatched path cannot be indexed")
        return PathGrid(self.states[index], self.noise_increments[index], self.grid)

    @classmethod
    def concatenate(cls, paths):
        paths = list(paths)
        if not paths:
            raise DomainError("cannot concatenate an empty list of paths")
        return cls(
            np.concatenate([p.states for p in paths]),
            np.concatenate([p.noise_increments for p in paths]),
            paths[0].grid,
        )


def _reduce(value):
    return float(value) if np.ndim(value) == 0 else value


def _check_grids(x, y):
    if not x.grid.same_segments(y.grid) or x.values.shape[-2:] != y.values.shape[-2:]:
        raise GridMismatchError(
            "segments live on different grids: dt {} vs {}, {} vs {} points".format(
                x.grid.dt, y.grid.dt, x.values.shape[-2], y.values.shape[-2]
            )
        )


def sup_dist(x, y):
    """Grid sup-distance max_i |x(t_i) - y(t_i)|, row-wise for batches."""
    _check_grids(x, y)
    return _reduce(np.max(np.linalg.norm(x.values - y.values, axis=-1), axis=-1))


def segment_at(path, k):
    """The L+1 states ending at step ``k``."""
    if int(k) != k or not 0 <= k <= path.steps:
        raise DomainError("step index {!r} outside [0, {}]".format(k, path.steps))
    k = int(k)
    return Segment(path.states[..., k:k + path.grid.segment_length, :], path.grid)
