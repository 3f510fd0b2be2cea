"""Cooperative LMS over agent networks, with Chebyshev-accelerated relaxation."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import preset_json as _preset_json, run_experiment_json as _run_experiment_json

__version__ = "0.1.0"


def preset(name):
    """Preset experiment config as a plain dict (same schema as the JSON config files)."""
    return _json.loads(_preset_json(name))


def run_experiment(config, out_dir=None):
    """Run an experiment from a config dict or JSON text.

    Returns mean ASE curves per graph and variant (plus spectra / comm totals
    for those kinds). CSVs and meta.json are written when out_dir is given.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    return _run_experiment_json(text, None if out_dir is None else str(out_dir))
