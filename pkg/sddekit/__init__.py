from flask import Flask

from dmutils import init_app

from config import configs


def create_app(config_name):
    application = Flask(__name__)

    # experiments run from the command line, so no HTTP error pages
    init_app(
        application,
        configs[config_name],
        error_handlers={},
    )

    from .main import main as main_blueprint

    application.register_blueprint(main_blueprint)

    return application
