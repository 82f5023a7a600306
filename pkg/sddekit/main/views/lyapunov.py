from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, write_result
)
from ...core.grid import Segment
from ...ergodicity import lyapunov_catalog, lyapunov_drift_check


def lyapunov(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    probes = estimator['probes']
    check_step_budget(estimator['paths'] * len(probes), grid.steps_for(estimator['h'], 'estimator.h'))

    spec = lyapunov_catalog(
        estimator['kappa'],
        estimator['h'],
        estimator['C_V'],
        alpha=estimator['alpha'],
        c=estimator['c'],
        b=estimator['b'],
        p=estimator['p'],
        a=estimator['a'],
        A=estimator['A'],
        sigma_bound_sq=estimator['sigma_bound_sq'],
    )
    report = lyapunov_drift_check(
        model,
        spec,
        Segment.stack(constant_segment(grid, value, model.dim_state) for value in probes),
        estimator['paths'],
        master_seed=experiment.master_seed,
    )

    header = ['probe', 'x0', 'case', 'V_x', 'drift', 'ci_halfwidth', 'bound', 'passes']
    rows = (
        [result.probe, x0, spec.case, result.V_x, result.drift, result.ci_halfwidth, result.bound, result.passes]
        for result, x0 in zip(report.results, probes)
    )
    return write_result(experiment, header, rows, out_dir)
