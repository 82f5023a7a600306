import os

import pytest

from sddekit.diagnostics import DeterministicDriver
from sddekit.errors import DomainError
from sddekit.main.forms.experiment_forms import parse_experiment
from sddekit.main.helpers.experiment_helpers import (
    check_step_budget,
    constant_segment,
    experiment_grid,
    experiment_pool,
    output_path,
    tail_driver,
    write_result,
)

from ...helpers import BaseApplicationTest


def simulate_experiment(output=None):
    document = {
        'kind': 'simulate',
        'model': {'id': 'linear-delay'},
        'grid': {'dt': 0.1, 'r': 0.5, 'horizon': 1.0},
    }
    if output:
        document['output'] = {'path': output}
    return parse_experiment(document)


class TestExperimentHelpers(BaseApplicationTest):

    def test_grid(self):
        grid = experiment_grid(simulate_experiment())
        assert grid.segment_length == 6

    def test_constant_segment(self):
        grid = experiment_grid(simulate_experiment())
        assert constant_segment(grid, [1.0, 2.0], 2).head.tolist() == [1.0, 2.0]
        with pytest.raises(DomainError):
            constant_segment(grid, [1.0, 2.0], 3)

    def test_step_budget(self):
        self.app.config['SDDE_MAX_TOTAL_STEPS'] = 100
        check_step_budget(10, 10)
        with pytest.raises(DomainError):
            check_step_budget(10, 11)

    def test_output_path(self):
        assert output_path(simulate_experiment()) == os.path.join(self.output_dir, 'simulate.csv')
        assert output_path(simulate_experiment('a/b.csv'), '/elsewhere') == '/elsewhere/b.csv'
        assert output_path(simulate_experiment('/abs/b.csv')) == '/abs/b.csv'

    def test_pool_uses_the_configured_workers(self):
        self.app.config['SDDE_WORKERS'] = 3
        assert experiment_pool().workers == 3

    def test_tail_driver(self):
        driver = tail_driver({'driver': 'deterministic', 'A': 2.0, 'lam': 1.0, 'v0': 0.0})
        assert isinstance(driver, DeterministicDriver)

    def test_write_result_records_provenance(self):
        experiment = simulate_experiment()
        path = write_result(experiment, ['a'], [[1]])

        with open(path, encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert 'kind simulate' in lines[1]
        assert lines[3] == '# config_sha256 {}'.format(experiment.config_hash)
        assert lines[-2:] == ['a', '1']
