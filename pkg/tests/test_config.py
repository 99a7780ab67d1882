"""Tests for configuration."""

import os
from pathlib import Path

import pytest

from twistsha.application.config import LoggerConfig, ServiceConfig

ENV_KEYS = [
    "TWISTSHA_CACHE",
    "TWISTSHA_FACTS",
    "TWISTSHA_LOGGER__FORMAT",
    "TWISTSHA_LOGGER__LEVEL",
]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Removes configuration variables set outside the test."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)


def test_logger_config_defaults():
    """Tests default values for LoggerConfig."""
    config = LoggerConfig()
    assert config.format == "pretty"
    assert config.level == "WARNING"


def test_logger_config_custom():
    """Tests custom values for LoggerConfig."""
    config = LoggerConfig(format="json", level="DEBUG")
    assert config.format == "json"
    assert config.level == "DEBUG"


def test_service_config_defaults():
    """Tests default values for ServiceConfig."""
    config = ServiceConfig()
    assert config.cache is None
    assert config.facts is None
    assert config.logger.format == "pretty"


def test_service_config_with_environment_variables():
    """Tests ServiceConfig with environment variables."""
    # Set environment variables
    os.environ.update(
        {
            "TWISTSHA_CACHE": "/tmp/twistsha-cache",
            "TWISTSHA_FACTS": "facts/delta_p11.json",
            "TWISTSHA_LOGGER__FORMAT": "json",
            "TWISTSHA_LOGGER__LEVEL": "INFO",
        }
    )

    try:
        config = ServiceConfig()
        assert config.cache == Path("/tmp/twistsha-cache")
        assert config.facts == Path("facts/delta_p11.json")
        assert config.logger.format == "json"
        assert config.logger.level == "INFO"
    finally:
        # Clean up environment variables
        for key in ENV_KEYS:
            os.environ.pop(key, None)


def test_invalid_log_format_rejected(monkeypatch):
    """Tests validation of the log format."""
    monkeypatch.setenv("TWISTSHA_LOGGER__FORMAT", "xml")
    with pytest.raises(ValueError):
        ServiceConfig()
