"""Volatility estimation in the time and state domains."""

import json as _json

from . import _core
from ._core import *  # noqa: F401,F403


def default_config(model="cir"):
    """Default configuration of a design as a dict."""
    return _json.loads(_core.default_config(model))


def run_study(config=None, **overrides):
    """Run a simulation study. `config` is a dict (or None for the CIR design)."""
    cfg = dict(config) if config is not None else default_config("cir")
    cfg.update(overrides)
    return _core.run_study(_json.dumps(cfg))


def run_backtest(csv_path, config=None, in_sample_len=0, forward_fill=False):
    """Backtest every estimator on a `date,value` CSV file."""
    return _core.run_backtest(str(csv_path), _json.dumps(config or {}), in_sample_len, forward_fill)
