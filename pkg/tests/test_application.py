from sddekit.main.forms.experiment_forms import KINDS
from sddekit.main.views import EXPERIMENT_VIEWS

from .helpers import BaseApplicationTest


class TestApplication(BaseApplicationTest):

    def test_every_experiment_kind_has_a_view(self):
        assert set(EXPERIMENT_VIEWS) == set(KINDS)

    def test_commands_are_registered_on_the_app(self):
        assert {'run', 'list-models'} <= set(self.app.cli.commands)

    def test_test_config(self):
        assert self.app.config['DEBUG'] is True
        assert self.app.config['SDDE_WORKERS'] == 1
        assert self.app.config['SDDE_CSV_SIGNIFICANT_DIGITS'] == 17
        assert self.app.config['DM_LOG_LEVEL'] == 'CRITICAL'
        assert self.app.config['DM_APP_NAME'] == 'sddekit'

    def test_list_models_command(self):
        result = self.invoke('list-models')

        assert result.exit_code == 0
        ids = [line.split('\t')[0] for line in result.output.strip().split('\n')]
        assert ids[0] == 'linear-delay'
        assert 'ou-nodelay' in ids

    def test_workers_option_overrides_the_config(self):
        document = self.experiment_document('simulate', {'paths': 2}, horizon=0.5)
        result = self.run_experiment(document, '--workers', '2')

        assert result.exit_code == 0, result.output
        assert self.app.config['SDDE_WORKERS'] == 2
