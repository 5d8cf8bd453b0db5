"""Shared fixtures for the test suite."""

import os
import sys

import pytest

# Add the project root directory to the path
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, project_root)

from app import create_app  # noqa: E402

SCENARIO_DIR = os.path.join(project_root, 'scenarios')


@pytest.fixture
def app():
    return create_app('testing')


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def scenario_path():
    def _path(name):
        return os.path.join(SCENARIO_DIR, name)
    return _path
