from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, write_result
)
from ...core.noise import BrownianNoise
from ...coupling import support_probe as run_support_probe


def support_probe(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    check_step_budget(estimator['paths'], grid.steps_for(estimator['h'], 'estimator.h'))

    report = run_support_probe(
        model,
        constant_segment(grid, estimator['x0'], model.dim_state),
        constant_segment(grid, estimator['z'], model.dim_state),
        estimator['h'],
        estimator['delta'],
        estimator['lam'],
        BrownianNoise.paths(experiment.master_seed, estimator['paths']),
    )

    header = ['h', 'delta', 'lambda', 'success_prob', 'kl_mean', 'lower_bound', 'log_n', 'n_paths']
    rows = [[
        estimator['h'], estimator['delta'], estimator['lam'], report.success_prob, report.kl_mean,
        report.lower_bound, report.log_n, report.n_paths,
    ]]
    return write_result(experiment, header, rows, out_dir)
