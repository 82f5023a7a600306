from flask import current_app

from ..helpers.experiment_helpers import check_step_budget, tail_driver, write_result
from ...core.grid import steps_of
from ...core.noise import BrownianNoise
from ...diagnostics import tail_bound_check


def tailcheck(experiment, out_dir=None):
    estimator = experiment.estimator
    check_step_budget(estimator['paths'], steps_of(estimator['T'], experiment.dt, 'estimator.T'))

    driver = tail_driver(estimator)
    report = tail_bound_check(
        driver,
        driver.tail_spec(estimator['delta'], estimator['T']),
        estimator['R_grid'],
        BrownianNoise.paths(experiment.master_seed, estimator['paths']),
        experiment.dt,
    )
    current_app.logger.info(
        "{code}: log-frequency slope in R^2 is {slope} with CI {slope_ci}",
        extra={'code': 'tailcheck.slope', 'slope': report.slope, 'slope_ci': report.slope_ci}
    )

    header = ['R', 'threshold', 'frequency', 'n_paths', 'n_discarded']
    rows = (
        [R, threshold, frequency, report.n_paths, report.n_discarded]
        for R, threshold, frequency in zip(report.R_grid, report.thresholds, report.frequencies)
    )
    return write_result(experiment, header, rows, out_dir)
