# Author: Ozy
"""
Run configuration for qverify.
Merges defaults, an optional JSON config file and command-line flags, then validates.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import psutil

from errors import ConfigError


class ConfigManager:
    """Holds the effective run configuration."""

    DEFAULT_CONFIG = {
        'ids': [],
        'order': 40,
        'engine': 'both',
        'points': 5,
        'tol': 1e-8,
        'seed': 0,
        'jobs': None,  # resolved to psutil.cpu_count() on load
        'format': 'json',
        'out': None,
        'timings': False,
        'debug': False,
    }

    ENGINES = ('exact', 'numeric', 'both')
    FORMATS = ('json', 'markdown')
    MIN_ORDER = 5

    def __init__(self, config_file: Optional[str] = None):
        """Start from defaults, then overlay config_file when given."""
        self.config_path = Path(config_file) if config_file else None
        self.config = self._load_config()

    @staticmethod
    def default_jobs() -> int:
        return psutil.cpu_count(logical=True) or os.cpu_count() or 1

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file when present; a missing or broken file is a ConfigError."""
        config = dict(self.DEFAULT_CONFIG)
        config['ids'] = []
        config['jobs'] = self.default_jobs()
        if self.config_path is None:
            return config
        if not self.config_path.exists():
            raise ConfigError(f"config file not found: {self.config_path}")
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            raise ConfigError(f"could not load config {self.config_path}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {self.config_path} must hold a JSON object")
        unknown = sorted(set(loaded) - set(self.DEFAULT_CONFIG))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        config.update(loaded)
        return config

    def save_config(self, path: str) -> None:
        """Write the effective configuration as JSON."""
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=2, sort_keys=True)
                f.write("\n")
        except IOError as e:
            raise ConfigError(f"could not write config to {path}: {e}") from e

    def get(self, key: str, default: Any = None) -> Any:
        return self.config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        if key not in self.DEFAULT_CONFIG:
            raise ConfigError(f"unknown config key: {key}")
        self.config[key] = value

    def update(self, updates: Dict[str, Any]) -> None:
        """Overlay non-None values (flags the user did not pass arrive as None)."""
        for key, value in updates.items():
            if value is not None:
                self.set(key, value)

    def validate(self) -> None:
        c = self.config
        try:
            c['order'] = int(c['order'])
            c['points'] = int(c['points'])
            c['seed'] = int(c['seed'])
            c['jobs'] = int(c['jobs'])
            c['tol'] = float(c['tol'])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"malformed numeric setting: {e}") from e
        if c['order'] < self.MIN_ORDER:
            raise ConfigError(f"order must be at least {self.MIN_ORDER}, got {c['order']}")
        if c['points'] < 1:
            raise ConfigError(f"points must be at least 1, got {c['points']}")
        if not c['tol'] > 0:
            raise ConfigError(f"tol must be positive, got {c['tol']}")
        if c['jobs'] < 1:
            raise ConfigError(f"jobs must be at least 1, got {c['jobs']}")
        if c['engine'] not in self.ENGINES:
            raise ConfigError(f"engine must be one of {', '.join(self.ENGINES)}, got {c['engine']!r}")
        if c['format'] not in self.FORMATS:
            raise ConfigError(f"format must be one of {', '.join(self.FORMATS)}, got {c['format']!r}")

    def as_header(self) -> Dict[str, Any]:
        """Settings that determine a report's content; jobs and output location are left out."""
        keys = ('order', 'engine', 'points', 'tol', 'seed')
        return {
            'effective': {k: self.config[k] for k in keys},
            'defaults': {k: self.DEFAULT_CONFIG[k] for k in keys},
        }
