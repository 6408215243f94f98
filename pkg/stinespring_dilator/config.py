"""
Configuration management module for the Stinespring dilator
"""
import copy
import os
from typing import Any, Dict, Optional

import yaml

from .errors import ConfigError


class Config:
    """Class to manage application configuration"""

    DEFAULT_CONFIG = {
        # Floating-point tolerances shared by every rank, positivity and residual decision
        'tolerance': {
            'atol': 1e-9,
            'rank_rtol': 1e-10,
            'psd_rtol': 1e-10,
        },
        # Render reports as text instead of JSON
        'human': False,
        'report_indent': 2,
        'log_level': None,
        # Defaults for the instance generator
        'gen': {
            'n': 2,
            'k': 1,
            'h1': 2,
            'h2': 4,
            'r': 1,
            'seed': 0,
        },
    }

    _NESTED_KEYS = ('tolerance', 'gen')

    def __init__(self, config_file: Optional[str] = None):
        """
        Initializes the configuration.

        Args:
            config_file: Path to the YAML configuration file (optional)
        """
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)

        if config_file and os.path.exists(config_file):
            self.load_from_file(config_file)

    def load_from_file(self, config_file: str) -> None:
        """
        Loads the configuration from a YAML file.

        Args:
            config_file: Path to the configuration file
        """
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                file_config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Error loading the configuration file: {e}") from e

        if not file_config:
            return
        if not isinstance(file_config, dict):
            raise ConfigError("Error loading the configuration file: top level must be a mapping")
        for key, value in file_config.items():
            if key in self._NESTED_KEYS:
                if not isinstance(value, dict):
                    raise ConfigError(f"Configuration section '{key}' must be a mapping")
                self._deep_merge(self.config[key], value)
            else:
                self.config[key] = value

    def _deep_merge(self, base: dict, update: dict) -> None:
        """
        Deep merge of nested dictionaries.

        Args:
            base: Base dictionary to update
            update: Dictionary with updates
        """
        for key, value in update.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._deep_merge(base[key], value)
            else:
                base[key] = value

    def update_from_args(self, args: Dict[str, Any]) -> None:
        """
        Updates the configuration with CLI arguments.
        CLI arguments take precedence over the configuration file.
        Dotted keys (``tolerance.atol``) address nested sections.

        Args:
            args: Dictionary with CLI arguments
        """
        for key, value in args.items():
            if value is None:
                continue
            section, _, leaf = key.rpartition('.')
            if section:
                self.config.setdefault(section, {})[leaf] = value
            else:
                self.config[key] = value

    def get(self, key: str, default: Any = None) -> Any:
        """
        Gets a configuration value.

        Args:
            key: Configuration key
            default: Default value if the key does not exist

        Returns:
            The configuration value
        """
        return self.config.get(key, default)
