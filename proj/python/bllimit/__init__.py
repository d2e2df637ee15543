"""Python access to the bllimit solvers."""

import json as _json

from ._core import (
    AdimOptions,
    ClosureSet,
    CurveDescriptor,
    DerivedConstants,
    Error,
    GasParameters,
    __version__,
    derive_constants,
    g_integral,
    solve_adim,
    solve_limit_profile,
    transform_check,
)
from . import _core


def run_sweep(eps_values=(0.2, 0.1, 0.05, 0.025), n_s=64, n_t=128, gas=None, domain=None, workers=0,
              output_dir=""):
    """eps study; returns {"rows": [...], "csv": path or ""}. No files unless output_dir is given."""
    raw = _core._sweep_json(list(eps_values), n_s, n_t, gas or GasParameters(), domain or CurveDescriptor(),
                            workers, str(output_dir))
    return _json.loads(raw)


def load_config(path):
    """Parsed and validated config file as a plain dict."""
    return _json.loads(_core._config_json(str(path)))


__all__ = [
    "AdimOptions", "ClosureSet", "CurveDescriptor", "DerivedConstants", "Error", "GasParameters",
    "__version__", "derive_constants", "g_integral", "load_config", "run_sweep", "solve_adim",
    "solve_limit_profile", "transform_check",
]
