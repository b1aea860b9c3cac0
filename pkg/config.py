"""Configuration settings for the singularity Hodge-level toolkit."""

import os
import logging
from pathlib import Path

logger = logging.getLogger(__name__)


# Load environment variables from .env file
def load_env_file() -> None:
    """Load environment variables from .env file if it exists."""
    env_file = Path(__file__).parent / '.env'
    if env_file.exists():
        with open(env_file, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith('#') and '=' in line:
                    key, value = line.split('=', 1)
                    key = key.strip()
                    value = value.strip().strip('"').strip("'")
                    os.environ.setdefault(key, value)


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    """Read an integer setting, falling back to the default on bad input."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={value}: below {minimum}, using {default}")
        return default
    return value


# Load .env file before accessing environment variables
load_env_file()

TOOL_VERSION = '1.0.0'

# Batch parallelism (process pool size)
WORKERS = _int_setting('SHL_WORKERS', os.cpu_count() or 1, minimum=1)

# Filtration cutoffs
DEFAULT_MAX_LEVEL = _int_setting('SHL_MAX_LEVEL', 3)
DEFAULT_CERTIFY_MARGIN = _int_setting('SHL_CERTIFY_MARGIN', 1)

# Exact elimination method handed to DomainMatrix.rref_den
RREF_METHOD = os.getenv('SHL_RREF_METHOD', 'FF')
if RREF_METHOD not in ('FF', 'GJ', 'CD'):
    logger.warning(f"Unknown SHL_RREF_METHOD={RREF_METHOD!r}, using 'FF'")
    RREF_METHOD = 'FF'

# Input limits
MAX_VARIABLES = 8

# Logging
LOG_LEVEL = os.getenv('SHL_LOG_LEVEL', 'INFO').upper()
if not isinstance(logging.getLevelName(LOG_LEVEL), int):
    logger.warning(f"Unknown SHL_LOG_LEVEL={LOG_LEVEL!r}, using 'INFO'")
    LOG_LEVEL = 'INFO'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Text report settings
MAX_TABLE_ROWS = 12
