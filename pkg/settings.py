"""
Runtime configuration for the Seifert cohomology toolkit
Reads environment variables (optionally from a .env file) and bootstraps logging
"""

import os
import logging
from typing import List

from dotenv import load_dotenv

load_dotenv()

_TRUTHY = {"1", "true", "yes", "on"}


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logging.warning(f"{name}={raw!r} is not an integer, using {default}")
        return default


def parse_prime_list(text: str) -> List[int]:
    """Parse a comma separated list such as "2,3,5" """
    primes = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if chunk:
            primes.append(int(chunk))
    return primes


# --- configuration values ---
LOG_LEVEL = os.getenv("SEIFERT_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("SEIFERT_LOG_FILE", "")
CORPUS_WORKERS = max(1, _int_from_env("SEIFERT_WORKERS", 1))
PARANOID_DEFAULT = os.getenv("SEIFERT_PARANOID", "0").strip().lower() in _TRUTHY
REPORT_DIR = os.getenv("SEIFERT_REPORT_DIR", "reports")

try:
    DEFAULT_PRIMES = parse_prime_list(os.getenv("SEIFERT_DEFAULT_PRIMES", "2,3,5"))
except ValueError:
    logging.warning("SEIFERT_DEFAULT_PRIMES is malformed, using 2,3,5")
    DEFAULT_PRIMES = [2, 3, 5]


def setup_logging(level: str = None) -> None:
    """
    Configure the root logger for command line use

    Args:
        level: Level name overriding SEIFERT_LOG_LEVEL
    """
    handlers = [logging.StreamHandler()]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE, encoding='utf-8'))

    level_name = (level or LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format='%(asctime)s - %(message)s',
        handlers=handlers
    )
