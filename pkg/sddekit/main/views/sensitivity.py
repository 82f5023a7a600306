import numpy as np
from flask import current_app

from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, experiment_pool, write_result
)
from ..helpers.path_tasks import sensitivity_chunk
from ...sensitivity import GradientEstimate


def sensitivity(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    model.require_gradients()
    times = sorted(estimator['times'])
    lambdas = estimator['lambdas']
    steps = sum(grid.steps_for(t, 'estimator.times') for t in times)
    check_step_budget(estimator['paths'] * (len(lambdas) + 2), steps)

    chunks = experiment_pool().map_paths(
        sensitivity_chunk,
        estimator['paths'],
        model,
        constant_segment(grid, estimator['x0'], model.dim_state),
        constant_segment(grid, estimator['z'], model.dim_state),
        estimator['functional'],
        times,
        lambdas,
        estimator['fd_eps'],
        experiment.master_seed,
    )
    gradient = np.concatenate([chunk[0] for chunk in chunks], axis=-1)
    bumped = np.concatenate([chunk[1] for chunk in chunks], axis=-1)

    header = ['t', 'lambda', 'value', 'std_error', 'fd_value', 'fd_std_error', 'agrees', 'n_paths']
    rows = []
    for i, t in enumerate(times):
        oracle = GradientEstimate.from_samples(bumped[i], None, t)
        for j, lam in enumerate(lambdas):
            estimate = GradientEstimate.from_samples(gradient[i, j], lam, t)
            agrees = estimate.agrees_with(oracle)
            if not agrees:
                current_app.logger.warning(
                    "{code}: estimate {value} at t={t} lambda={lam} disagrees with the bump oracle {fd_value}",
                    extra={
                        'code': 'sensitivity.oracle-mismatch',
                        'value': estimate.value,
                        't': t,
                        'lam': lam,
                        'fd_value': oracle.value,
                    }
                )
            rows.append([
                t, lam, estimate.value, estimate.std_error, oracle.value, oracle.std_error, agrees,
                estimate.n_paths,
            ])
    return write_result(experiment, header, rows, out_dir)
