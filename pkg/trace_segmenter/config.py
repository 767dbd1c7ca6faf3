"""
Configuration module for the trace segmenter.
"""

import os
import json
import logging
from typing import Dict, Optional

from .core import ConfigError
from .preprocess import PreprocessConfig
from .segmenter import CANDIDATE_RANGES, DEFAULT_BRUTE_FORCE_LIMIT, GreedyConfig

logger = logging.getLogger("trace_segmenter.config")

DEFAULT_CONFIG = {
    "ptv_fraction": 0.6,
    "restore_offsets": True,
    "epsilon": 1e-12,
    "max_iterations": None,
    "candidate_range": "both",
    "brute_force_limit": DEFAULT_BRUTE_FORCE_LIMIT,
    "max_workers": 1,
    "plot_width": 960,
    "plot_height": 480,
    "log_level": "INFO",
    "log_file": None,
}


class TraceSegmenterConfig:
    """Configuration manager for the trace segmenter."""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration.

        Args:
            config_file: Path to a JSON configuration file (optional)
        """
        self.config = self._load_config(config_file)
        self.validate()

    def _load_config(self, config_file: Optional[str]) -> Dict:
        """Load configuration from file or use defaults."""
        config = dict(DEFAULT_CONFIG)

        if config_file and os.path.exists(config_file):
            try:
                with open(config_file) as f:
                    user_config = json.load(f)
            except (json.JSONDecodeError, IOError) as e:
                logger.warning(f"Error loading config file: {e}. Using defaults.")
                return config
            if not isinstance(user_config, dict):
                raise ConfigError(f"Config file {config_file} must contain a JSON object")
            for key, value in user_config.items():
                if key not in DEFAULT_CONFIG:
                    logger.warning(f"Ignoring unknown config key: {key}")
                    continue
                config[key] = value
        elif config_file:
            logger.warning(f"Config file not found: {config_file}. Using defaults.")

        return config

    def validate(self) -> None:
        """Check every value; raise ConfigError on the first bad one."""
        c = self.config
        if not isinstance(c["ptv_fraction"], (int, float)) or not 0 < c["ptv_fraction"] <= 1:
            raise ConfigError(f"ptv_fraction must be in (0, 1], got {c['ptv_fraction']}")
        if not isinstance(c["epsilon"], (int, float)) or c["epsilon"] <= 0:
            raise ConfigError(f"epsilon must be positive, got {c['epsilon']}")
        if c["max_iterations"] is not None and (not isinstance(c["max_iterations"], int) or c["max_iterations"] < 1):
            raise ConfigError(f"max_iterations must be a positive integer or null, got {c['max_iterations']}")
        if c["candidate_range"] not in CANDIDATE_RANGES:
            raise ConfigError(f"candidate_range must be one of {CANDIDATE_RANGES}, got {c['candidate_range']!r}")
        if not isinstance(c["brute_force_limit"], int) or c["brute_force_limit"] < 1:
            raise ConfigError(f"brute_force_limit must be a positive integer, got {c['brute_force_limit']}")
        if c["max_workers"] is not None and (not isinstance(c["max_workers"], int) or c["max_workers"] < 1):
            raise ConfigError(f"max_workers must be a positive integer or null, got {c['max_workers']}")
        for key in ("plot_width", "plot_height"):
            if not isinstance(c[key], int) or c[key] < 200:
                raise ConfigError(f"{key} must be an integer >= 200, got {c[key]}")
        if not isinstance(getattr(logging, str(c["log_level"]).upper(), None), int):
            raise ConfigError(f"Unknown log_level: {c['log_level']}")

    def setup_logging(self, verbose: bool = False):
        """Configure logging based on settings; verbose forces DEBUG."""
        log_level = logging.DEBUG if verbose else getattr(logging, self.config["log_level"].upper())
        handlers = [logging.StreamHandler()]

        log_file = self.config["log_file"]
        if log_file:
            # Create log directory if it doesn't exist
            log_dir = os.path.dirname(log_file)
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir)
            handlers.append(logging.FileHandler(log_file))

        logging.basicConfig(
            level=log_level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
            force=True,
        )

    def get(self, key: str, default=None):
        """Get configuration value."""
        return self.config.get(key, default)

    def set(self, key: str, value):
        """Set configuration value and re-validate."""
        if key not in DEFAULT_CONFIG:
            raise ConfigError(f"Unknown config key: {key}")
        previous = self.config[key]
        self.config[key] = value
        try:
            self.validate()
        except ConfigError:
            self.config[key] = previous
            raise

    def save(self, config_file: str):
        """Save configuration to file."""
        try:
            with open(config_file, 'w') as f:
                json.dump(self.config, f, indent=4)
        except IOError as e:
            logger.error(f"Error saving config file: {e}")
            raise

    def preprocess_config(self) -> PreprocessConfig:
        return PreprocessConfig(
            ptv_fraction=float(self.config["ptv_fraction"]),
            restore_offsets=bool(self.config["restore_offsets"]),
        )

    def greedy_config(self) -> GreedyConfig:
        return GreedyConfig(
            epsilon=float(self.config["epsilon"]),
            max_iterations=self.config["max_iterations"],
            candidate_range=self.config["candidate_range"],
        )
