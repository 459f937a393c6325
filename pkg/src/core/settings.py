import logging
import os
from typing import Dict, Optional

import yaml
from pythonjsonlogger import jsonlogger

CONFIG_ENV_VAR = "DICHOTOMY_LAB_CONFIG_PATH"
LOG_LEVEL_ENV_VAR = "DICHOTOMY_LAB_LOG_LEVEL"
DEFAULT_CONFIG_PATH = os.path.join("config", "config.yaml")

logger = logging.getLogger(__name__)


def load_config(path: Optional[str] = None) -> Dict:
    """
    Load the hierarchical YAML configuration.

    Args:
        path: explicit file path; falls back to $DICHOTOMY_LAB_CONFIG_PATH and
            then to config/config.yaml. A missing default file yields {}.

    Returns:
        Configuration dictionary with one section per package
    """
    explicit = path or os.environ.get(CONFIG_ENV_VAR)
    config_path = explicit or DEFAULT_CONFIG_PATH
    if not os.path.exists(config_path):
        if explicit:
            raise FileNotFoundError(f"configuration file not found: {config_path}")
        logger.debug(f"no configuration at {config_path}, using built-in defaults")
        return {}
    with open(config_path, "r") as f:
        config = yaml.safe_load(f) or {}
    level = os.environ.get(LOG_LEVEL_ENV_VAR)
    if level:
        config.setdefault("app", {})["log_level"] = level
    return config


def section(config: Dict, name: str) -> Dict:
    """A package section of the configuration, {} when absent."""
    return dict((config or {}).get(name) or {})


def setup_logging(app_config: Optional[Dict] = None) -> None:
    """Configure the root logger from the `app` section (log_level, log_format)."""
    app_config = app_config or {}
    level = str(app_config.get("log_level", "WARNING")).upper()
    handler = logging.StreamHandler()
    if app_config.get("log_format", "json") == "json":
        formatter = jsonlogger.JsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s")
    else:
        formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    handler.setFormatter(formatter)
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level)
