import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from flask import Flask

from app.config import get_config


def create_app(config_name=None):
    """Application factory pattern"""

    app = Flask(__name__)

    # Load configuration
    if config_name is None:
        config_name = os.getenv('QMSS_ENV', 'development')

    config_obj = get_config(config_name)
    app.config.from_object(config_obj)

    # Register command blueprints
    register_blueprints(app)

    # Configure logging
    configure_logging(app)

    return app


def register_blueprints(app):
    """Register command blueprints on app.cli"""

    # Import and register blueprints here to avoid circular imports
    from app.commands.noise import bp as noise_bp
    from app.commands.protocol import bp as protocol_bp

    app.register_blueprint(protocol_bp)
    app.register_blueprint(noise_bp)


def configure_logging(app):
    """
    Configure application logging.

    Diagnostics go to stderr so stdout carries only command output.
    Service modules log under `app.*` and propagate to app.logger.
    """

    # Drop handlers from earlier factories (tests build many apps)
    for handler in list(app.logger.handlers):
        app.logger.removeHandler(handler)

    # Set logging format
    formatter = logging.Formatter(
        '[%(asctime)s] %(levelname)s in %(module)s: %(message)s'
    )
    log_level = getattr(logging, app.config.get('LOG_LEVEL', 'INFO').upper(), logging.INFO)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    stream_handler.setLevel(log_level)
    app.logger.addHandler(stream_handler)

    log_file = app.config.get('LOG_FILE')
    if log_file:
        # Create the log directory if it doesn't exist
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

        # Set up file handler with rotation
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10240000,  # 10MB
            backupCount=10
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(log_level)
        app.logger.addHandler(file_handler)

    app.logger.setLevel(log_level)
    app.logger.debug('Application startup')
