import logging
import os

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("ignoring malformed %s=%r, using %d", name, raw, default)
        return default


# Working precision used by numeric commands when --digits is not given
DEFAULT_DIGITS = _int_env("DZV_DEFAULT_DIGITS", 50)
MIN_DIGITS = _int_env("DZV_MIN_DIGITS", 10)

# Largest weight accepted by the commands and by numeric evaluation
MAX_WEIGHT = _int_env("DZV_MAX_WEIGHT", 200)

# Verification ledger (SQLite by default, next to the working directory)
DATABASE_URL = os.getenv("DZV_DATABASE_URL", "sqlite:///./dzv.db")

# 0 means: one worker per physical core
TABLE_WORKERS = _int_env("DZV_TABLE_WORKERS", 0)

LOG_LEVEL = os.getenv("DZV_LOG_LEVEL", "WARNING").upper()

# Persisted table format
TABLE_SCHEMA_VERSION = 1
