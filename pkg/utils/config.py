#!/usr/bin/env python3
"""
Configuration Manager for the Cayley toolkit
Handles numeric defaults (tolerances, sample counts, dyadic ranges) per module
"""

import copy
import json
import logging
from pathlib import Path
from typing import Dict, Any, Optional

from utils import constants as C

logger = logging.getLogger(__name__)

# Default configuration
DEFAULT_CONFIG = {
    "quartic": {
        "weights": list(C.QUARTIC_WEIGHTS),
        "newton_tol": C.NEWTON_TOL,
        "max_iter": C.NEWTON_MAX_ITER,
        "rank_tol": C.RANK_TOL,
        "fiber_tol": C.FIBER_TOL,
        "cluster_tol": C.CLUSTER_TOL,
        "locus_tol": C.LOCUS_TOL,
        "workers": 1
    },
    "lattice": {
        "tol": C.LATTICE_TOL,
        "max_denominator": C.MAX_DENOMINATOR,
        "random_triples": 1000,
        "seed": 7
    },
    "index": {
        "spectrum": "quadric"
    },
    "model": {
        "samples": C.CALIBRATION_SAMPLES,
        "calibration_tol": C.CALIBRATION_TOL,
        "rate_window": list(C.RATE_WINDOW),
        "det_radii": list(C.DET_RADII),
        "seed": 11
    },
    "neck": {
        "p": C.NECK_P,
        "k": 0,
        "t_exponents": list(C.NECK_T_EXPONENTS),
        "quad_rel_tol": C.QUAD_REL_TOL,
        "fold_ratio": C.FOLD_RATIO,
        "fold_alphas": list(C.FOLD_ALPHAS),
        "fit_tol": 0.02
    },
    "contraction": {
        "max_iter": C.CONTRACTION_MAX_ITER,
        "tol": C.CONTRACTION_TOL,
        "divergence_factor": C.DIVERGENCE_FACTOR,
        "smallness_threshold": C.SMALLNESS_THRESHOLD,
        "random_instances": 1000,
        "seed": 3
    },
    "tcs": {
        "lambda": C.TORSION_LAMBDA,
        "threshold_tol": 1e-12
    },
    "report": {
        "include_timing": True
    }
}


class ToolkitConfig:
    """Manages toolkit configuration and numeric defaults"""

    def __init__(self, config_file: Optional[str] = None):
        """Initialize the config manager

        Args:
            config_file: Optional custom config file path
        """
        if config_file:
            self.config_file = Path(config_file)
        else:
            from utils.paths import get_config_file_path
            self.config_file = get_config_file_path()

        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.load_config()

    def load_config(self) -> None:
        """Load configuration from file, merging over defaults"""
        if not self.config_file.exists():
            logger.debug(f"No configuration file at {self.config_file}, using defaults")
            return
        with open(self.config_file, 'r') as f:
            saved_config = json.load(f)
        self._merge_config(self.config, saved_config)
        logger.info(f"Configuration loaded from {self.config_file}")

    def save_config(self) -> None:
        """Save configuration to file"""
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, 'w') as f:
            json.dump(self.config, f, indent=2)
        logger.debug(f"Configuration saved to {self.config_file}")

    def _merge_config(self, default: Dict[str, Any], saved: Dict[str, Any]) -> None:
        """Recursively merge saved config with defaults"""
        for key, value in saved.items():
            if key in default:
                if isinstance(value, dict) and isinstance(default[key], dict):
                    self._merge_config(default[key], value)
                else:
                    default[key] = value
            else:
                logger.warning(f"Ignoring unknown configuration key: {key}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation (e.g. 'quartic.newton_tol')"""
        try:
            value = self.config
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any, save: bool = False) -> None:
        """Set configuration value using dot notation"""
        keys = key.split('.')
        config = self.config
        for k in keys[:-1]:
            config = config.setdefault(k, {})
        config[keys[-1]] = value
        if save:
            self.save_config()

    def section(self, name: str) -> Dict[str, Any]:
        """Get a copy of one module's configuration block"""
        return copy.deepcopy(self.config.get(name, {}))

    def scale_tolerances(self, factor: float) -> None:
        """Multiply every tolerance key by factor (--tol-scale)"""
        if factor <= 0:
            raise ValueError(f"tolerance scale must be positive, got {factor}")
        for block in self.config.values():
            if not isinstance(block, dict):
                continue
            for key, value in block.items():
                if "tol" in key and isinstance(value, (int, float)):
                    block[key] = value * factor
        logger.debug(f"Tolerances scaled by {factor}")

    def reset_to_defaults(self) -> None:
        """Reset configuration to defaults"""
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        logger.info("Configuration reset to defaults")

    def export_config(self, file_path: str) -> None:
        """Export configuration to a file"""
        with open(file_path, 'w') as f:
            json.dump(self.config, f, indent=2)
        logger.info(f"Configuration exported to {file_path}")


# Global config instance
_config = None


def get_config(config_file: Optional[str] = None) -> ToolkitConfig:
    """Get the global configuration manager instance"""
    global _config
    if _config is None or config_file is not None:
        _config = ToolkitConfig(config_file)
    return _config
