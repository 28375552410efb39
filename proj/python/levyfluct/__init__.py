"""Scale functions, fluctuation identities and path simulation for
spectrally negative Levy processes."""

import json

from ._core import (
    InsufficientSampleError,
    LevyModel,
    ScaleBuildError,
    ScaleEvaluator,
    default_experiments,
    esscher_tilt,
    exit_down_lt,
    exit_up_lt,
    h_intermediate,
    h_post_sup,
    h_tilde,
    joint_sup_inf_cdf,
    max_loss_post_sup_cdf,
    one_sided_down_lt,
    post_inf_sup_cdf,
    simulate_path,
)
from ._core import default_spec as _default_spec
from ._core import run_experiment as _run_experiment


def default_spec(name):
    """The shipped spec for `name` as a dict."""
    return json.loads(_default_spec(name))


def run_experiment(spec, workers=1):
    """Run a spec (dict or experiment id) and return the report as a dict."""
    if isinstance(spec, str):
        spec = default_spec(spec)
    return _run_experiment(json.dumps(spec), workers)


__all__ = [
    "InsufficientSampleError",
    "LevyModel",
    "ScaleBuildError",
    "ScaleEvaluator",
    "default_experiments",
    "default_spec",
    "esscher_tilt",
    "exit_down_lt",
    "exit_up_lt",
    "h_intermediate",
    "h_post_sup",
    "h_tilde",
    "joint_sup_inf_cdf",
    "max_loss_post_sup_cdf",
    "one_sided_down_lt",
    "post_inf_sup_cdf",
    "run_experiment",
    "simulate_path",
]
