# config.py
import logging
import os

from dotenv import load_dotenv

from evit.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

# Worker count used when --jobs is not given
DEFAULT_JOBS = int(os.getenv("EVIT_JOBS", "1"))

LOG_LEVEL = os.getenv("EVIT_LOG_LEVEL", "INFO")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s [%(stage)s] %(message)s"


class _StageDefault(logging.Filter):
    """Fill in the `stage` field for records logged without one."""

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "stage"):
            record.stage = "-"
        return True


def setup_logging(level: str | int | None = None) -> None:
    """
    Configure a single stderr handler for the `evit` logger tree.

    Safe to call more than once; the handler is only installed the first time.
    """
    level = level or LOG_LEVEL
    if isinstance(level, str):
        level = level.upper()

    logger = logging.getLogger("evit")
    try:
        logger.setLevel(level)
    except (TypeError, ValueError):
        raise ConfigError(f"Unknown log level {level!r}") from None
    if any(getattr(h, "_evit", False) for h in logger.handlers):
        return

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.addFilter(_StageDefault())
    handler._evit = True
    logger.addHandler(handler)


def resolve_output_dir(configured: str) -> str:
    """EVIT_OUT, when set, wins over the run config's output_dir."""
    override = os.getenv("EVIT_OUT")
    return override if override else configured
