from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, experiment_pool, write_result
)
from ..helpers.path_tasks import simulate_chunk
from ...core.grid import PathGrid


def simulate(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    steps = grid.steps_for(experiment.horizon, 'grid.horizon')
    check_step_budget(estimator['paths'], steps)

    init = constant_segment(grid, estimator['x0'], model.dim_state)
    paths = PathGrid.concatenate(experiment_pool().map_paths(
        simulate_chunk, estimator['paths'], model, init, steps, experiment.master_seed
    ))

    times = paths.times()
    header = ['path', 't'] + ['x{}'.format(i) for i in range(model.dim_state)]
    rows = (
        [index, t] + list(state)
        for index in range(len(paths))
        for t, state in zip(times, paths.states[index])
    )
    return write_result(experiment, header, rows, out_dir)
