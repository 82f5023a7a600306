import math

import numpy as np
from flask import current_app

from ..helpers.experiment_helpers import (
    check_step_budget, constant_segment, experiment_grid, experiment_model, write_result
)
from ...core.noise import BrownianNoise
from ...coupling import MetricSpec
from ...ergodicity import PowerPhi, distance_curve, fit_rate_envelope, normal_fit_check, stationary_estimate
from ...errors import DomainError


def ergodic(experiment, out_dir=None):
    estimator = experiment.estimator
    grid = experiment_grid(experiment)
    model = experiment_model(experiment)
    last = grid.steps_for(max(estimator['times']), 'estimator.times')
    check_step_budget(estimator['paths'], last)

    x = constant_segment(grid, estimator['x0'], model.dim_state)
    reference = stationary_estimate(
        model,
        x,
        estimator['burn_in'],
        estimator['spacing'],
        estimator['stationary_samples'],
        BrownianNoise(experiment.master_seed, 0, stream_tag='stationary'),
        max_total_steps=current_app.config['SDDE_MAX_TOTAL_STEPS'],
    )
    curve = distance_curve(
        model,
        x,
        estimator['times'],
        reference,
        MetricSpec(estimator['N'], estimator['gamma']),
        BrownianNoise.paths(experiment.master_seed, estimator['paths']),
        n_boot=estimator['bootstrap'],
        boot_seed=experiment.master_seed,
        max_samples=current_app.config['SDDE_MAX_OT_SAMPLES'],
    )
    if not curve.non_increasing():
        current_app.logger.info(
            "{code}: distance curve rises beyond its confidence band",
            extra={'code': 'ergodic.not-monotone'}
        )

    phi = PowerPhi(estimator['phi_c'], 1.0)
    V_x = math.exp(estimator['lyapunov_alpha'] * float(np.max(np.abs(x.head))))
    try:
        envelope = fit_rate_envelope(curve.times, curve.distances, V_x, phi, estimator['delta'])
    except DomainError as e:
        current_app.logger.info(
            "{code}: no rate envelope fitted. Error: {error}",
            extra={'code': 'ergodic.no-envelope', 'error': str(e)}
        )
        envelope = None

    variance = getattr(model, 'stationary_variance', None)
    header = ['t', 'distance', 'std_error', 'envelope', 'ks_statistic', 'ks_p_value', 'ks_passes', 'n_paths']
    rows = []
    for t, distance, std_error, heads in zip(curve.times, curve.distances, curve.std_errors, curve.heads):
        bound = envelope(t, V_x, phi) if envelope is not None else None
        fit = normal_fit_check(heads[:, 0], variance) if variance is not None else None
        rows.append([
            t, distance, std_error, bound,
            fit.statistic if fit else None,
            fit.p_value if fit else None,
            fit.passes if fit else None,
            curve.n_paths,
        ])
    return write_result(experiment, header, rows, out_dir)
