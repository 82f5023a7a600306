import os

from flask.cli import FlaskGroup

from sddekit import create_app


application = create_app(os.getenv("DM_ENVIRONMENT") or "development")

cli = FlaskGroup(create_app=lambda: application, add_default_commands=False)

if __name__ == '__main__':
    cli()
