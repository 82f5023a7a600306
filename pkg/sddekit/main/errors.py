# coding=utf-8

from .helpers.logging_helpers import log_experiment_error
from ..errors import ConfigError, SddeError, UnknownModelError


EXIT_CONFIG_ERROR = 2
EXIT_UNKNOWN_MODEL = 3
EXIT_TOOLKIT_ERROR = 1


def config_error_handler(e):
    log_experiment_error(e, 'config', 'experiment.config-error')
    return EXIT_CONFIG_ERROR, "Invalid experiment config: {}".format(e)


def unknown_model_handler(e):
    log_experiment_error(e, 'model', 'experiment.unknown-model')
    return EXIT_UNKNOWN_MODEL, "Unknown model '{}'; run list-models to see the catalog".format(e.model_id)


def toolkit_error_handler(e):
    log_experiment_error(e, type(e).__name__, 'experiment.failed')
    return EXIT_TOOLKIT_ERROR, "Experiment failed: {}".format(e)


# most specific first
ERROR_HANDLERS = (
    (UnknownModelError, unknown_model_handler),
    (ConfigError, config_error_handler),
    (SddeError, toolkit_error_handler),
)


def handle_experiment_error(e):
    """(exit status, message) for a toolkit error, logged on the way."""
    for exception_class, handler in ERROR_HANDLERS:
        if isinstance(e, exception_class):
            return handler(e)
    raise e
