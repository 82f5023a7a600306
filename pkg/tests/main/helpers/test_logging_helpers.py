import mock

from sddekit.main.helpers.logging_helpers import log_experiment_error, log_experiment_written

from ...helpers import BaseApplicationTest


class TestLoggingHelpers(BaseApplicationTest):

    @mock.patch('sddekit.main.helpers.logging_helpers.current_app')
    def test_log_experiment_error(self, current_app):
        log_experiment_error(ValueError('boom'), 'couple', 'experiment.failed')

        assert current_app.logger.error.call_args_list == [mock.call(
            "{code}: {kind} experiment failed. Error: {error}",
            extra={'error': 'boom', 'code': 'experiment.failed', 'kind': 'couple'}
        )]

    @mock.patch('sddekit.main.helpers.logging_helpers.current_app')
    def test_log_experiment_written(self, current_app):
        log_experiment_written('simulate', '/tmp/out.csv', 12)

        assert current_app.logger.info.call_args_list == [mock.call(
            "{code}: {kind} experiment wrote {rows} rows to {path}",
            extra={'code': 'experiment.written', 'kind': 'simulate', 'rows': 12, 'path': '/tmp/out.csv'}
        )]
