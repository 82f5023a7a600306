"""Module-level tasks handed to ``PathPool.map_paths``.

Each one rebuilds the noise for its own slice of global path indices, so it
can run in a spawned worker with nothing but its arguments.
"""
import numpy as np

from ...core.integrator import em_simulate
from ...core.noise import BrownianNoise
from ...coupling import run_controlled, run_synchronous
from ...functionals import get_functional
from ...sensitivity import fd_samples, gradient_samples


def simulate_chunk(indices, model, init, steps, master_seed):
    return em_simulate(model, init, steps, BrownianNoise(master_seed, indices))


def couple_chunk(indices, model, x, y, spec, steps, master_seed, synchronous):
    noise = BrownianNoise(master_seed, indices)
    if synchronous:
        return run_synchronous(model, x, y, steps, noise)
    return run_controlled(model, x, y, spec, steps, noise)


def sensitivity_chunk(indices, model, x, z, functional, times, lambdas, fd_eps, master_seed):
    """Representation samples of shape (times, lambdas, paths) and bump samples of shape (times, paths)."""
    f = get_functional(functional)
    noise = BrownianNoise(master_seed, indices)
    gradient = np.stack([
        np.stack([gradient_samples(model, x, z, f.value, f.pairing, t, lam, noise) for lam in lambdas])
        for t in times
    ])
    bumped = np.stack([fd_samples(model, x, z, f.value, t, fd_eps, noise) for t in times])
    return gradient, bumped
