import numpy as np

from ..errors import DomainError
from ..seeds import BASE_STREAM, path_generator


class BrownianNoise:
    """Gaussian increments N(0, dt I_m), one counter-addressed stream per path.

    ``path_indices`` may be a single integer (an unbatched path) or an
    iterable of indices (a batch with one row per index). The increments of
    path ``i`` do not depend on which other indices are drawn with it.
    """

    def __init__(self, master_seed, path_indices=0, stream_tag=BASE_STREAM):
        self.master_seed = int(master_seed)
        self.single = np.ndim(path_indices) == 0 and not isinstance(path_indices, range)
        if self.single:
            self.path_indices = (int(path_indices),)
        else:
            self.path_indices = tuple(int(i) for i in path_indices)
        self.stream_tag = stream_tag

    @classmethod
    def paths(cls, master_seed, n_paths, stream_tag=BASE_STREAM):
        if n_paths < 1:
            raise DomainError("at least one path is required, got {!r}".format(n_paths))
        return cls(master_seed, range(n_paths), stream_tag)

    def __len__(self):
        return len(self.path_indices)

    def subset(self, indices):
        return BrownianNoise(self.master_seed, indices, self.stream_tag)

    def with_tag(self, stream_tag):
        noise = BrownianNoise(self.master_seed, self.path_indices, stream_tag)
        noise.single = self.single
        return noise

    def generator(self, position=0):
        return path_generator(self.master_seed, self.path_indices[position], self.stream_tag)

    def increments(self, steps, dim, dt):
        scale = np.sqrt(dt)
        draws = np.stack([
            path_generator(self.master_seed, index, self.stream_tag).standard_normal((steps, dim))
            for index in self.path_indices
        ])
        draws *= scale
        return draws[0] if self.single else draws

    def __repr__(self):
        return "<BrownianNoise seed={} paths={} tag={!r}>".format(
            self.master_seed, len(self), self.stream_tag
        )


def resolve_increments(noise, steps, dim, dt):
    """Increments of shape (..., steps, dim) from a noise source or a recorded array."""
    if isinstance(noise, BrownianNoise):
        return noise.increments(steps, dim, dt)
    increments = np.asarray(noise, dtype=float)
    if increments.ndim < 2 or increments.shape[-2:] != (steps, dim):
        raise DomainError(
            "recorded increments of shape {} do not match {} steps of a {}-dimensional noise".format(
                increments.shape, steps, dim
            )
        )
    return increments
