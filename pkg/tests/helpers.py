import os
import shutil
import tempfile

import numpy as np
import yaml
from sddekit import create_app
from sddekit.core import CallbackModel, Segment, TimeGrid


def unit_grid(dt=0.1, r=1.0):
    return TimeGrid.from_durations(dt, r)


def constant(grid, value, dim=1):
    return Segment.constant(grid, value, dim)


def brownian_model(s=1.0):
    """dX = s dW, the simplest model with a right inverse."""
    return CallbackModel(
        drift=lambda x: np.zeros(x.shape[:-2] + (1,)),
        diffusion=lambda x: np.full((1, 1), s),
        diffusion_right_inverse=lambda x: np.full((1, 1), 1 / s),
        drift_gradient=lambda x, u: np.zeros(u.shape[:-2] + (1,)),
        diffusion_gradient=lambda x, u: np.zeros((1, 1)),
        inverse_bound=1 / s,
        name='brownian',
    )


def drifting_model(beta, s=1.0):
    """dX = beta dt + s dW."""
    return CallbackModel(
        drift=lambda x: np.full(x.shape[:-2] + (1,), float(beta)),
        diffusion=lambda x: np.full((1, 1), s),
        diffusion_right_inverse=lambda x: np.full((1, 1), 1 / s),
        name='drifting',
    )


class BaseApplicationTest(object):
    def setup_method(self, method):
        self.app = create_app('test')
        self.output_dir = tempfile.mkdtemp()
        self.app.config['SDDE_OUTPUT_DIR'] = self.output_dir
        self.app_context = self.app.app_context()
        self.app_context.push()

    def teardown_method(self, method):
        self.app_context.pop()
        shutil.rmtree(self.output_dir, ignore_errors=True)

    def write_config(self, document, filename='experiment.yaml'):
        path = os.path.join(self.output_dir, filename)
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(document, f)
        return path

    @staticmethod
    def experiment_document(kind, estimator, model_id='linear-delay', params=None, dt=0.1, r=1.0,
                            horizon=None, seed=0, output='result.csv'):
        document = {
            'kind': kind,
            'grid': {'dt': dt, 'r': r},
            'seeds': {'master': seed},
            'estimator': estimator,
            'output': {'path': output},
        }
        if model_id is not None:
            document['model'] = {'id': model_id, 'params': params or {}}
        if horizon is not None:
            document['grid']['horizon'] = horizon
        return document

    def result_rows(self, path):
        """Header and body rows of a result CSV, metadata skipped."""
        with open(path, encoding='utf-8') as f:
            lines = [line.rstrip('\n') for line in f if not line.startswith('#')]
        return lines[0].split(','), [line.split(',') for line in lines[1:]]

    def invoke(self, *args):
        return self.app.test_cli_runner().invoke(args=list(args))

    def run_experiment(self, document, *args):
        """Run ``document`` through the ``run`` command with results written to the output dir."""
        return self.invoke('run', self.write_config(document), '--out', self.output_dir, *args)
