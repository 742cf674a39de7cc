"""
tests/conftest.py

Shared fixtures: logger isolation, the --run-slow switch, a Click runner
and scripted bit sources for exact executions.
"""

import logging

import pytest
from click.testing import CliRunner

from anonpram.rng import ScriptedBits


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run acceptance-scale simulations (minutes each)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _reset_logging_handlers():
    """Close and drop anonpram handlers so every test configures logging afresh."""
    yield
    pkg_logger = logging.getLogger("anonpram")
    for handler in pkg_logger.handlers[:]:
        handler.flush()
        handler.close()
    pkg_logger.handlers.clear()


@pytest.fixture(autouse=True)
def _isolated_log_dir(tmp_path_factory, monkeypatch):
    """Keep debug JSON logs written by CLI tests inside a per-test tmp dir."""
    log_dir = tmp_path_factory.mktemp("logs")
    monkeypatch.setattr("anonpram.logging_utils._get_log_directory", lambda: str(log_dir))
    return log_dir


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def scripted():
    """Factory: per-processor word lists -> a ``bit_sources`` callable for run_program."""

    def _make(words_by_processor):
        return lambda idx: ScriptedBits(words_by_processor[idx])

    return _make
