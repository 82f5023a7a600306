import os

from dmutils.status import get_version_label

basedir = os.path.abspath(os.path.dirname(__file__))


class Config(object):

    VERSION = get_version_label(
        os.path.abspath(os.path.dirname(__file__))
    ) or '0.1.0'

    # worker processes for path batches; results never depend on this
    SDDE_WORKERS = 1
    SDDE_OUTPUT_DIR = os.path.join(basedir, 'output')

    SDDE_CSV_SIGNIFICANT_DIGITS = 17
    # exact OT regime; larger samples must be subsampled by the caller
    SDDE_MAX_OT_SAMPLES = 512
    SDDE_MAX_TOTAL_STEPS = 50_000_000

    DEBUG = False

    # LOGGING
    DM_LOG_LEVEL = 'DEBUG'
    DM_PLAIN_TEXT_LOGS = False
    DM_LOG_PATH = None
    DM_APP_NAME = 'sddekit'


class Test(Config):
    DEBUG = True
    DM_PLAIN_TEXT_LOGS = True
    DM_LOG_LEVEL = 'CRITICAL'

    SDDE_OUTPUT_DIR = os.path.join(basedir, '.test-output')


class Development(Config):
    DEBUG = True
    DM_PLAIN_TEXT_LOGS = True
    DM_LOG_LEVEL = 'INFO'


class Live(Config):
    """Base config for batch hosts"""
    DEBUG = False
    DM_LOG_LEVEL = 'INFO'
    DM_LOG_PATH = '/var/log/sddekit/application.log'

    SDDE_WORKERS = os.cpu_count() or 1
    SDDE_OUTPUT_DIR = '/var/lib/sddekit/output'


class Production(Live):
    pass


configs = {
    'development': Development,
    'test': Test,
    'production': Production,
}
