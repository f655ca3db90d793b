"""
Runtime settings for the calculator CLI.

Values start from DEFAULT_CONFIG and are overridden by INTDIFF_* environment
variables, optionally supplied through a .env file in the project root or
the current directory.
"""

import logging
import os
from functools import lru_cache
from pathlib import Path

import dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigurationError

PROJECT_ROOT = Path(__file__).parent.parent
ENV_PREFIX = "INTDIFF_"

DEFAULT_CONFIG = {
    "log_level": "WARNING",
    "max_window_doublings": 6,
    "commutant_window": 4,
    "linvset_samples": 3,
    "json_indent": 2,
}

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Validated settings; only the CLI reads these, library calls take explicit arguments."""

    log_level: str = Field(description="Root log level used by the CLI")
    max_window_doublings: int = Field(
        ge=0, description="Retries of the certified-window procedure before giving up"
    )
    commutant_window: int = Field(ge=0, description="Default N for the commutant verb")
    linvset_samples: int = Field(ge=1, description="Default number of sampled left inverses")
    json_indent: int = Field(ge=0, description="Indentation of --json output")

    def logging_level(self) -> int:
        return logging.getLevelName(self.log_level.upper())


def _load_env_files() -> None:
    dotenv.load_dotenv(PROJECT_ROOT / ".env")
    dotenv.load_dotenv(Path.cwd() / ".env")


def settings_from_environ(environ: dict[str, str] | None = None) -> Settings:
    """Build Settings from DEFAULT_CONFIG and an environment mapping (os.environ by default)."""
    environ = os.environ if environ is None else environ
    values = dict(DEFAULT_CONFIG)
    for key in DEFAULT_CONFIG:
        raw = environ.get(ENV_PREFIX + key.upper())
        if raw is not None and raw.strip():
            values[key] = raw.strip()
    try:
        settings = Settings(**values)
    except ValidationError as exc:
        field = exc.errors()[0]["loc"][0]
        raise ConfigurationError(
            f"invalid value for {ENV_PREFIX}{str(field).upper()}: {exc.errors()[0]['msg']}"
        ) from None
    if not isinstance(settings.logging_level(), int):
        raise ConfigurationError(f"invalid value for {ENV_PREFIX}LOG_LEVEL: {settings.log_level!r}")
    return settings


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    """Settings for this process; .env files are read on the first call."""
    _load_env_files()
    return settings_from_environ()
