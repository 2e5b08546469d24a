"""Python access to the powershap selection engine."""

import json

import numpy as np

from . import _core
from ._core import ValidationError, make_dataset, required_iterations, tt_test_power

__all__ = [
    "ValidationError",
    "make_dataset",
    "required_iterations",
    "select",
    "tt_test_power",
]


def select(X, y, **options):
    """Run a selection and return the report as a dict.

    Options mirror the CLI flags with underscores (mode, alpha, power,
    iterations, seed, learner, n_estimators, ...). The report has the same
    layout as the JSON written by ``powershap select``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    return json.loads(_core.select_json(X, y, **options))
