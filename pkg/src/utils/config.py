#!/usr/bin/env python3
"""
Configuration module for the IFCIL verifier
-------------------------------------------
Handles loading, parsing and accessing configuration settings.
"""

import copy
import os
from pathlib import Path

import yaml

from src.utils.errors import ConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class Config:
    """Configuration manager for the verifier."""

    DEFAULT_CONFIG = {
        'system': {
            'name': 'IFCIL verifier',
            'log_level': 'INFO',
            'log_file': None,
        },
        'flows': {
            'table': None,  # None: built-in directions, with a warning
            'strict': False,
        },
        'refinement': {
            'search_budget': 20000,
        },
        'verifier': {
            'determinization_limit': 16384,
            'witness_cap': 20,
            'workers': 1,
        },
        'oracle': {
            'max_types': 12,
        },
        'nusmv': {
            'binary': 'NuSMV',
            'timeout': 60,
            'compact_constraints': False,
            'rename': {},
        },
    }

    def __init__(self, config_file=None):
        """
        Initialize configuration.

        Args:
            config_file: Path to YAML configuration file
        """
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)

        if config_file and os.path.exists(config_file):
            self._load_from_file(config_file)
            logger.info(f"Configuration loaded from {config_file}")
        elif config_file:
            logger.warning(f"Config file {config_file} not found. Using default configuration.")

        self._resolve_paths()

    def _load_from_file(self, config_file):
        """Load configuration from YAML file and merge with defaults."""
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                file_config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot load config file {config_file}: {e}") from e

        if file_config is None:
            return
        if not isinstance(file_config, dict):
            raise ConfigError(f"config file {config_file} must hold a mapping")
        self._deep_update(self.config, file_config)

    def _deep_update(self, target, source):
        """Recursively update nested dictionaries."""
        for key, value in source.items():
            if key in target and isinstance(target[key], dict) and isinstance(value, dict):
                self._deep_update(target[key], value)
            else:
                target[key] = value

    def _resolve_paths(self):
        """Anchor relative file settings at the project root."""
        project_root = Path(__file__).resolve().parent.parent.parent
        for key_path in ('flows.table', 'system.log_file'):
            path = self.get(key_path)
            if path and not os.path.isabs(path):
                self.set(key_path, os.path.join(project_root, path))

    def get(self, key_path, default=None):
        """
        Get a configuration value using dot notation path.

        Args:
            key_path: Dot-separated path to the config value (e.g., 'verifier.witness_cap')
            default: Default value to return if key not found

        Returns:
            Configuration value or default
        """
        value = self.config
        try:
            for key in key_path.split('.'):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key_path, value):
        """Set a configuration value using dot notation path."""
        keys = key_path.split('.')
        config = self.config
        for key in keys[:-1]:
            if key not in config or not isinstance(config[key], dict):
                config[key] = {}
            config = config[key]
        config[keys[-1]] = value

    def save(self, config_file):
        """Save current configuration to file."""
        with open(config_file, 'w', encoding='utf-8') as f:
            yaml.safe_dump(self.config, f, default_flow_style=False)
        logger.info(f"Configuration saved to {config_file}")
