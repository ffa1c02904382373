from __future__ import annotations

import logging
import logging.config
import os
from dataclasses import dataclass, field
from typing import Any

from dotenv import load_dotenv

FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def _from_env(name: str, default: str) -> Any:
    """Field read when the config is built; an empty variable counts as unset."""
    return field(default_factory=lambda: os.getenv(name) or default)


@dataclass
class LoggingConfig:
    level: str = _from_env("EMBEDKIT_LOGGING_LEVEL", "INFO")
    filename: str = _from_env("EMBEDKIT_LOG_FILE", "")

    def setup(self) -> LoggingConfig:
        logging.config.dictConfig(self.as_dict())

        return self

    def numeric_level(self) -> int:
        if self.level.isdigit():
            return int(self.level)

        value = logging.getLevelName(self.level.upper())
        return value if isinstance(value, int) else logging.INFO

    def handlers(self) -> list[str]:
        return ["console", "file"] if self.filename else ["console"]

    def as_dict(self) -> dict[str, Any]:
        level = self.numeric_level()
        handlers: dict[str, Any] = {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "standard",
                "level": level,
                "stream": "ext://sys.stderr",
            },
        }
        if self.filename:
            handlers["file"] = {
                "class": "logging.handlers.RotatingFileHandler",
                "formatter": "standard",
                "level": level,
                "filename": self.filename,
                "maxBytes": 1024 * 1024,
                "backupCount": 10,
            }

        return {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"standard": {"format": FORMAT}},
            "handlers": handlers,
            "loggers": {
                "embedkit": {
                    "handlers": self.handlers(),
                    "level": level,
                    "propagate": False,
                },
            },
        }


@dataclass
class Runtime:
    logging: LoggingConfig

    @classmethod
    def from_env(cls, path: str = ".env") -> Runtime:
        load_dotenv(path)

        return cls(LoggingConfig().setup())
