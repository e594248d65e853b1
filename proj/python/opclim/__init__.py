"""Python bindings for the opclim simulator.

Configs may be given as a dict, a JSON string, or a path to a JSON file.
"""

import json
import os

from . import _opclim
from ._opclim import ConfigError, NumericError, bimodality_coefficient, default_params

__all__ = [
    "ConfigError",
    "NumericError",
    "bimodality_coefficient",
    "calibrate",
    "default_params",
    "normalize_config",
    "run",
    "run_replicates",
    "sweep",
]


def _config_text(config):
    if config is None:
        return ""
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, os.PathLike) or (isinstance(config, str) and config.endswith(".json")
                                           and os.path.exists(config)):
        with open(config, encoding="utf-8") as fh:
            return fh.read()
    return config


def run(config=None, seed=None, threads=1):
    return _opclim.run(_config_text(config), seed, threads)


def run_replicates(config=None, n=20, seed=None, threads=1):
    return _opclim.run_replicates(_config_text(config), n, seed, threads)


def sweep(config, replicates=None, threads=1):
    return _opclim.sweep(_config_text(config), replicates, threads)


def calibrate(config=None, budget=None, replicates=None, threads=1):
    return _opclim.calibrate(_config_text(config), budget, replicates, threads)


def normalize_config(config=None):
    return json.loads(_opclim.normalize_config(_config_text(config)))
