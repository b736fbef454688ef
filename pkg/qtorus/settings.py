"""
Settings

Loads optional numeric and logging defaults from settings.ini.
"""

import configparser
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Dict, Tuple

from .operation_logger import get_logger


@dataclass(frozen=True)
class Settings:
    """Defaults for every tunable knob; command line flags override these."""
    prune_threshold: float = 0.0
    theta_tolerance: float = 1e-15
    theta_max_terms: int = 1000
    grid: int = 200
    hermite_nodes: int = 60
    output: str = "csv"
    tolerance: float = 1e-8
    truncation: int = 50
    workers: int = 1
    log_file: str = "logs/operations.log"
    log_level: str = "INFO"


def _positive_int(value: str) -> int:
    parsed = int(value)
    if parsed < 1:
        raise ValueError(f"expected a positive integer, got {value}")
    return parsed


def _non_negative_float(value: str) -> float:
    parsed = float(value)
    if parsed < 0:
        raise ValueError(f"expected a non-negative number, got {value}")
    return parsed


def _positive_float(value: str) -> float:
    parsed = float(value)
    if parsed <= 0:
        raise ValueError(f"expected a positive number, got {value}")
    return parsed


def _output_format(value: str) -> str:
    value = value.strip().lower()
    if value not in ("csv", "json"):
        raise ValueError(f"output must be csv or json, got {value}")
    return value


# (section, key) -> (field name, parser)
_FIELDS: Dict[Tuple[str, str], Tuple[str, Callable[[str], Any]]] = {
    ("algebra", "prune_threshold"): ("prune_threshold", _non_negative_float),
    ("theta", "tolerance"): ("theta_tolerance", _positive_float),
    ("theta", "max_terms"): ("theta_max_terms", _positive_int),
    ("quadrature", "grid"): ("grid", _positive_int),
    ("quadrature", "hermite_nodes"): ("hermite_nodes", _positive_int),
    ("cli", "output"): ("output", _output_format),
    ("cli", "tolerance"): ("tolerance", _positive_float),
    ("cli", "truncation"): ("truncation", _positive_int),
    ("cli", "workers"): ("workers", _positive_int),
    ("logging", "log_file"): ("log_file", str),
    ("logging", "level"): ("log_level", str),
}


def load_settings(settings_path: str = "settings.ini") -> Settings:
    """
    Read settings.ini and overlay valid values on the built-in defaults.

    A missing file yields pure defaults. Values that fail to parse are
    logged and ignored rather than aborting the run.

    Args:
        settings_path: Path to the ini file

    Returns:
        Settings instance
    """
    logger = get_logger()
    settings = Settings()
    settings_file = Path(settings_path)
    if not settings_file.exists():
        return settings

    config = configparser.ConfigParser()
    try:
        config.read(settings_file, encoding='utf-8')
    except configparser.Error as e:
        logger.warning(f"Could not read {settings_path}: {e}")
        return settings

    overrides: Dict[str, Any] = {}
    for (section, key), (field_name, parser) in _FIELDS.items():
        if section not in config:
            continue
        raw = config[section].get(key, '').strip()
        if not raw:
            continue
        try:
            overrides[field_name] = parser(raw)
        except ValueError as e:
            logger.warning(f"Invalid {key} in [{section}] of {settings_path}: {e}")

    return replace(settings, **overrides)
