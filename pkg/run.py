import os

from flask.cli import FlaskGroup

from app import create_app


def make_app():
    return create_app(os.getenv('QMSS_ENV', 'development'))


# Only the toolkit's own commands; Flask's server commands are not registered
cli = FlaskGroup(create_app=make_app, add_default_commands=False, help='Quantum multi-secret sharing toolkit.')

if __name__ == '__main__':
    cli()
