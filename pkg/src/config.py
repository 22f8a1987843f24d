"""
Settings for the command-line tool.

Precedence, lowest first: built-in defaults, the YAML settings file given
with --config, environment variables (a .env file is loaded first), then
command-line flags.
"""
import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping, Optional

import yaml
from dotenv import load_dotenv

from classify import DEFAULT_NODE_BUDGET, DEFAULT_POLYNOMIAL_BOUND
from homotopy import DEFAULT_TRACE_BUDGET
from validation import SettingsValidationError, SettingsValidator

logger = logging.getLogger(__name__)

ENV_VARIABLES = {
    "budget_nodes": "EVAKO_BUDGET_NODES",
    "trace_budget": "EVAKO_TRACE_BUDGET",
    "seed": "EVAKO_SEED",
    "log_level": "LOG_LEVEL",
}


@dataclass(frozen=True)
class Settings:
    budget_nodes: int = DEFAULT_NODE_BUDGET
    trace_budget: int = DEFAULT_TRACE_BUDGET
    seed: int = 0
    polynomial_bound: int = DEFAULT_POLYNOMIAL_BOUND
    log_level: str = "WARNING"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_settings_file(path: str) -> Dict[str, Any]:
    """
    Raises:
        SettingsValidationError: If the file cannot be read or parsed
    """
    logger.info(f"Loading settings from: {path}")
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise SettingsValidationError(f"Cannot load settings file {path}: {e}")
    return data or {}


def load_env_settings(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """
    Settings from environment variables.

    Raises:
        SettingsValidationError: If a numeric variable is not an integer
    """
    if environ is None:
        load_dotenv()
        environ = os.environ
    found: Dict[str, Any] = {}
    for key, variable in ENV_VARIABLES.items():
        value = environ.get(variable)
        if value is None or value == "":
            continue
        if key == "log_level":
            found[key] = value.upper()
            continue
        try:
            found[key] = int(value)
        except ValueError:
            raise SettingsValidationError(f"{variable} must be an integer, got '{value}'")
    return found


def load_settings(
    config_path: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Settings:
    """
    Merge all settings sources and validate the result.

    Args:
        config_path: Optional YAML settings file
        overrides: Values from command-line flags; None entries are ignored
        environ: Environment mapping (defaults to os.environ after loading .env)

    Raises:
        SettingsValidationError: If any source holds an invalid value
    """
    merged: Dict[str, Any] = {}
    if config_path:
        from_file = load_settings_file(config_path)
        SettingsValidator(from_file).validate()
        merged.update(from_file)
    merged.update(load_env_settings(environ))
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})

    SettingsValidator(merged).validate()
    if "log_level" in merged:
        merged["log_level"] = merged["log_level"].upper()
    settings = Settings(**merged)
    logger.debug(f"Settings: {settings}")
    return settings
