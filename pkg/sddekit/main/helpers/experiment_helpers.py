import os

from flask import current_app

from ...catalog import build_model
from ...core.grid import Segment, TimeGrid
from ...diagnostics import DeterministicDriver, SquaredOUDriver
from ...errors import DomainError
from ...pool import PathPool
from .csv_helpers import metadata_lines, write_csv
from .logging_helpers import log_experiment_written


def experiment_grid(experiment):
    return TimeGrid.from_durations(experiment.dt, experiment.r)


def experiment_model(experiment):
    return build_model(experiment.model_id, experiment.model_params)


def experiment_pool():
    return PathPool(workers=current_app.config['SDDE_WORKERS'])


def tail_driver(estimator):
    if estimator['driver'] == DeterministicDriver.name:
        return DeterministicDriver(estimator['A'], estimator['lam'], estimator['v0'])
    return SquaredOUDriver(estimator['theta'], estimator['s'], estimator['cap'], estimator['x0'])


def constant_segment(grid, value, dim):
    """A constant initial segment; a scalar fills every coordinate."""
    if isinstance(value, list) and len(value) != dim:
        raise DomainError("state of length {} given for a {}-dimensional model".format(len(value), dim))
    return Segment.constant(grid, value, dim)


def check_step_budget(paths, steps):
    budget = current_app.config['SDDE_MAX_TOTAL_STEPS']
    if paths * steps > budget:
        raise DomainError(
            "{} paths of {} steps exceed the budget of {} simulated steps".format(paths, steps, budget)
        )


def output_path(experiment, out_dir=None):
    filename = experiment.output_path or '{}.csv'.format(experiment.kind)
    if out_dir:
        return os.path.join(out_dir, os.path.basename(filename))
    if os.path.isabs(filename):
        return filename
    return os.path.join(current_app.config['SDDE_OUTPUT_DIR'], filename)


def write_result(experiment, header, rows, out_dir=None):
    path = output_path(experiment, out_dir)
    count = write_csv(
        path,
        header,
        rows,
        metadata=metadata_lines(experiment),
        digits=current_app.config['SDDE_CSV_SIGNIFICANT_DIGITS'],
    )
    log_experiment_written(experiment.kind, path, count)
    return path
