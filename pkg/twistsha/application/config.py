"""Application configuration."""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggerConfig(BaseSettings):
    """Logging configuration."""

    model_config = SettingsConfigDict(env_prefix="TWISTSHA_LOGGER__")

    format: Literal["json", "pretty"] = Field(
        default="pretty", description="Log format"
    )
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Minimum level written to stderr"
    )


class ServiceConfig(BaseSettings):
    """Main service configuration."""

    model_config = SettingsConfigDict(
        env_prefix="TWISTSHA_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    logger: LoggerConfig = Field(default_factory=LoggerConfig)
    cache: Path | None = Field(
        default=None, description="Directory holding cached expansions"
    )
    facts: Path | None = Field(default=None, description="Default FactsFile")
