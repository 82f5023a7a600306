from flask import current_app


def log_experiment_error(exception, kind, error_code):
    """
    Log errors in a separate module so we can patch `current_app.logger` in tests
    and assert the calls, without affecting the CLI runner.
    """
    current_app.logger.error(
        "{code}: {kind} experiment failed. Error: {error}",
        extra={
            'error': str(exception),
            'code': '{}'.format(error_code),
            'kind': kind,
        }
    )


def log_experiment_written(kind, path, rows):
    current_app.logger.info(
        "{code}: {kind} experiment wrote {rows} rows to {path}",
        extra={
            'code': 'experiment.written',
            'kind': kind,
            'rows': rows,
            'path': path,
        }
    )
