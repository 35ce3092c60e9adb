"""Uniform evaluation of user functions.

A function is any callable taking a 1-D point and returning a float. Objects that
also expose ``batch(points)`` (parsed expressions do) are evaluated a block of
points at a time; plain callables fall back to a Python loop.
"""

from __future__ import annotations

import numpy as np

from .errors import EvaluationError
from .expr import Expr, parse


def as_function(f):
    """Accept expression source text, a parsed tree, or a callable."""
    if isinstance(f, str):
        return parse(f)
    if not callable(f):
        raise TypeError(f"expected a callable or expression source, got {type(f).__name__}")
    return f


def eval_points(f, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if hasattr(f, "batch"):
        values = np.asarray(f.batch(pts), dtype=float)
    else:
        values = np.fromiter((f(p) for p in pts), dtype=float, count=pts.shape[0])
    if not np.all(np.isfinite(values)):
        raise EvaluationError("function returned a non-finite value")
    return values


def eval_point(f, x) -> float:
    if isinstance(f, Expr):
        return f(x)
    value = float(f(np.asarray(x, dtype=float)))
    if not np.isfinite(value):
        raise EvaluationError(f"function returned {value} at {np.asarray(x).tolist()}")
    return value


class Negated:
    """``-f``, keeping batch evaluation when ``f`` has it."""

    def __init__(self, f):
        self.f = f
        if hasattr(f, "batch"):
            self.batch = lambda pts: -np.asarray(f.batch(pts), dtype=float)

    def __call__(self, x):
        return -eval_point(self.f, x)
