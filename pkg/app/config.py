import os
from dotenv import load_dotenv

from app.models.access import MAX_PARTICIPANTS
from app.models.quantum import DENSITY_MATRIX_CAP, STATE_VECTOR_CAP

# Force .env file to override system environment variables
# This ensures .env always takes precedence
load_dotenv(override=True)


def get_default_seed():
    """
    Get the fallback seed used when a command receives no --seed flag.

    Set QMSS_SEED in .env or the environment. Non-integer values are
    ignored and the seed falls back to 0.
    """
    raw = os.getenv('QMSS_SEED', '0')
    try:
        return int(raw)
    except ValueError:
        return 0


class Config:
    """Base configuration"""

    # Randomness
    DEFAULT_SEED = get_default_seed()
    RANDOM_INVERTIBLE_ATTEMPTS = 1000

    # Desk-scale caps. The two register caps can only tighten the model limits
    MAX_PARTICIPANTS = MAX_PARTICIPANTS
    STATE_VECTOR_CAP = STATE_VECTOR_CAP
    DENSITY_MATRIX_CAP = DENSITY_MATRIX_CAP

    # Formula vs simulation agreement for noise sweeps
    FIDELITY_TOLERANCE = 1e-9

    # Noise sweeps (rows are independent, so a thread pool is safe)
    SWEEP_WORKERS = int(os.getenv('SWEEP_WORKERS', 1))

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', '')

    DEBUG = False
    TESTING = False


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEFAULT_SEED = 0
    LOG_LEVEL = 'WARNING'
    LOG_FILE = ''
    SWEEP_WORKERS = 1


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(config_name=None):
    """Get configuration based on environment"""
    if config_name is None:
        config_name = os.getenv('QMSS_ENV', 'development')

    return config.get(config_name, config['default'])
