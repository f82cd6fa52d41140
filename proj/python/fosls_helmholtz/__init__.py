# Copyright the fosls-helmholtz authors.
# SPDX-License-Identifier: Apache-2.0
"""FOSLS finite elements for the 2D Helmholtz equation with Robin boundary data."""

import json as _json
import os as _os

from ._core import (
    CapExceeded,
    ConfigError,
    bessel_j0,
    bessel_j1,
    coercivity,
    predicted_ndof,
    solve,
    solver_backend,
    trace,
    version,
)
from . import _core

__version__ = version()


def _as_text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def canonical_config(config):
    """Validate a config (dict or JSON text) and return it with defaults filled in."""
    return _json.loads(_core.canonical_config(_as_text(config)))


def config_hash(config):
    return _core.config_hash(_as_text(config))


def run_experiment(config, out_dir, override_caps=False):
    """Run an experiment config, writing CSV files and meta.json into out_dir.

    Returns the number of rows that did not finish with status ok.
    """
    return _core.run_experiment(_as_text(config), _os.fspath(out_dir), override_caps)


__all__ = [
    "CapExceeded",
    "ConfigError",
    "bessel_j0",
    "bessel_j1",
    "canonical_config",
    "coercivity",
    "config_hash",
    "predicted_ndof",
    "run_experiment",
    "solve",
    "solver_backend",
    "trace",
    "version",
]
