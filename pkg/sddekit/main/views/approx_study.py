import numpy as np

from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, write_result
)
from ...core.grid import Segment
from ...core.model import standard_probe_cloud
from ...core.noise import BrownianNoise
from ...coupling import approximation_study
from ...errors import MissingCapabilityError


def approx_study(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    if not hasattr(model, 'mollify'):
        raise MissingCapabilityError('a mollified family', model)
    steps = grid.steps_for(estimator['T'], 'estimator.T')
    check_step_budget(estimator['paths'] * (1 + len(estimator['eps'])), steps)

    pairs = standard_probe_cloud(grid, model.dim_state, estimator['probes'], experiment.master_seed)
    probes = Segment(np.concatenate([pairs[0].values, pairs[1].values]), grid)
    report = approximation_study(
        model,
        {eps: model.mollify(eps) for eps in estimator['eps']},
        constant_segment(grid, estimator['x0'], model.dim_state),
        estimator['T'],
        estimator['gamma'],
        BrownianNoise.paths(experiment.master_seed, estimator['paths']),
        probes,
        floor=estimator['upsilon_floor'],
        threshold_mult=estimator['threshold_mult'],
    )

    header = [
        'eps', 'upsilon', 'floored', 'gain', 'success_freq', 'kl_mean', 'kl_max', 'kl_bound',
        'kl_bound_respected', 'n_paths',
    ]
    rows = (
        [row.eps, row.upsilon, row.floored, row.gain, row.success_freq, row.kl_mean, row.kl_max, row.kl_bound,
         row.kl_bound_respected, row.n_paths]
        for row in report.rows
    )
    return write_result(experiment, header, rows, out_dir)
