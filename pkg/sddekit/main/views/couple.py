import numpy as np
from flask import current_app

from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, experiment_pool, write_result
)
from ..helpers.path_tasks import couple_chunk
from ...coupling import ControlSpec, CoupledRun, contraction_estimate
from ...girsanov import MAX_LOG_WEIGHT


def couple(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    steps = grid.steps_for(estimator['h'], 'estimator.h')
    check_step_budget(2 * estimator['paths'], steps)

    x = constant_segment(grid, estimator['x0'], model.dim_state)
    y = constant_segment(grid, estimator['y0'], model.dim_state)
    spec = ControlSpec(
        gamma=estimator['gamma'],
        threshold_mult=estimator['threshold_mult'],
        mode=estimator['mode'],
        law=estimator['law'],
        gain=estimator['gain'],
    )
    runs = CoupledRun.concatenate(experiment_pool().map_paths(
        couple_chunk, estimator['paths'], model, x, y, spec, steps, experiment.master_seed,
        estimator['coupling'] == 'synchronous',
    ))

    summary = contraction_estimate(runs, estimator['h'], estimator['theta'])
    current_app.logger.info(
        "{code}: exceedance {exceed_prob} mean ratio {mean_ratio} tv bound {tv_bound} over {n_runs} runs",
        extra={
            'code': 'couple.summary',
            'exceed_prob': summary.exceed_prob,
            'mean_ratio': summary.mean_ratio,
            'tv_bound': summary.tv_bound,
            'n_runs': summary.n_runs,
        }
    )

    distance = runs.distance_at(steps)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(runs.upsilon > 0, distance / runs.upsilon, 0.0)
    header = ['path', 'upsilon', 'tau_step', 'distance_h', 'ratio', 'exceeds', 'kl', 'log_weight']
    rows = (
        [
            index,
            runs.upsilon[index],
            int(runs.tau_step[index]) if runs.stopped[index] else None,
            distance[index],
            ratio[index],
            bool(distance[index] >= estimator['theta'] * runs.upsilon[index]),
            runs.ledger.kl_half_integral[index],
            min(runs.ledger.log_exponent[index], MAX_LOG_WEIGHT),
        ]
        for index in range(len(runs))
    )
    return write_result(experiment, header, rows, out_dir)
