"""Relative entropy toolkit on 1-D cell-averaged fields."""

import json as _json

from ._core import (
    Grid,
    RelentError,
    bregman as _bregman,
    ckp_check,
    cli,
    eval_grad as _eval_grad,
    eval_h as _eval_h,
    experiments,
    kl_divergence,
    lp_distance,
    materialize as _materialize,
    rel_entropy as _rel_entropy,
    run_experiment as _run_experiment,
)


def _spec(entropy):
    if isinstance(entropy, str):
        entropy = {"family": entropy}
    return _json.dumps(entropy)


def bregman(entropy, v, u):
    return _bregman(_spec(entropy), v, u)


def eval_h(entropy, x):
    return _eval_h(_spec(entropy), x)


def eval_grad(entropy, x):
    return _eval_grad(_spec(entropy), x)


def rel_entropy(entropy, grid, v, u):
    return _rel_entropy(_spec(entropy), grid, list(v), list(u))


def materialize(sequence, n, grid):
    return _materialize(_json.dumps(sequence), n, grid)


def run_experiment(name, config):
    """Runs an experiment; returns (verdict dict, csv text)."""
    cfg = dict(config)
    cfg.setdefault("schema", 1)
    verdict, csv = _run_experiment(name, _json.dumps(cfg))
    return _json.loads(verdict), csv


__all__ = [
    "Grid",
    "RelentError",
    "bregman",
    "ckp_check",
    "cli",
    "eval_grad",
    "eval_h",
    "experiments",
    "kl_divergence",
    "lp_distance",
    "materialize",
    "rel_entropy",
    "run_experiment",
]
