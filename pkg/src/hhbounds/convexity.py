"""Randomized falsifiers for coordinatewise and joint convexity.

All checkers here can only disprove: a ``not_falsified`` verdict means no violation
larger than ``tolerance`` turned up in the sampled trials.
"""

from __future__ import annotations

import math

import numpy as np

from .box import Box, as_vector, as_weight, corner_weights, interpolate, mixed_corner_array
from .errors import DimensionError, DomainError
from .functions import eval_point, eval_points
from .verdict import FALSIFIED, NOT_FALSIFIED, ConvexityVerdict

DEFAULT_TOLERANCE = 1e-9
LEMMA_SUM_RTOL = 1e-12
_CHUNK = 1 << 16


def defining_inequality_gap(f, x, y, t) -> float:
    """Right side minus left side of the coordinatewise-convexity inequality.

    The left side is ``f(t x + (1 - t) y)``; the right side is the sum over the
    ``2^n`` mixed corners ``c`` (``c_i`` is ``x_i`` or ``y_i``) of
    ``prod_i p_i * f(c)`` with ``p_i = t_i`` where ``c_i = x_i`` and ``1 - t_i``
    where ``c_i = y_i``. A negative gap is a violation.
    """
    x, y = as_vector(x, "x"), as_vector(y, "y")
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")
    t = as_weight(t, x.size)
    lhs = eval_point(f, interpolate(t, x, y))
    values = eval_points(f, mixed_corner_array(x, y))
    rhs = math.fsum((corner_weights(t) * values).tolist())
    return rhs - lhs


def _sample_lambda(rng: np.random.Generator, trials: int) -> np.ndarray:
    lam = rng.random(trials)
    lam[0::4] = 0.5
    for k, v in ((1, 0.0), (2, 1.0)):
        if k < trials:
            lam[k] = v
    return lam


def _first_violation(gaps: np.ndarray, tolerance: float) -> int | None:
    bad = np.flatnonzero(gaps < -tolerance)
    return int(bad[0]) if bad.size else None


def _check_args(trials: int, tolerance: float):
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if tolerance < 0:
        raise DomainError("tolerance must be >= 0")


def is_nfold_convex_fn(
    f, box: Box, trials: int = 10_000, tolerance: float = DEFAULT_TOLERANCE, rng_seed: int = 0
) -> ConvexityVerdict:
    """Look for a violation of convexity along one coordinate axis at a time.

    Each trial picks an axis ``i``, a base point in ``box``, two values ``u, v`` in
    ``[a_i, b_i]`` and a weight ``lam``; it checks
    ``f(.., lam u + (1 - lam) v, ..) <= lam f(.., u, ..) + (1 - lam) f(.., v, ..)``.
    """
    _check_args(trials, tolerance)
    rng = np.random.default_rng(rng_seed)
    n = box.n
    axes = rng.integers(0, n, size=trials)
    base = box.lower + rng.random((trials, n)) * box.widths
    lo, width = box.lower[axes], box.widths[axes]
    u = lo + rng.random(trials) * width
    v = lo + rng.random(trials) * width
    lam = _sample_lambda(rng, trials)
    m = lam * u + (1.0 - lam) * v

    rows = np.arange(trials)
    for start in range(0, trials, _CHUNK):
        sl = slice(start, min(start + _CHUNK, trials))
        r = rows[sl]
        pu, pv, pm = base[sl].copy(), base[sl].copy(), base[sl].copy()
        pu[r - start, axes[sl]] = u[sl]
        pv[r - start, axes[sl]] = v[sl]
        pm[r - start, axes[sl]] = m[sl]
        fu, fv, fm = eval_points(f, pu), eval_points(f, pv), eval_points(f, pm)
        rhs = lam[sl] * fu + (1.0 - lam[sl]) * fv
        k = _first_violation(rhs - fm, tolerance)
        if k is not None:
            j = start + k
            witness = {
                "trial": j,
                "axis": int(axes[j]) + 1,
                "point": base[j].tolist(),
                "u": float(u[j]),
                "v": float(v[j]),
                "lambda": float(lam[j]),
                "lhs": float(fm[k]),
                "rhs": float(rhs[k]),
                "violation": float(fm[k] - rhs[k]),
            }
            return ConvexityVerdict(FALSIFIED, witness, j + 1, tolerance, kind="nfold_convex")
    return ConvexityVerdict(NOT_FALSIFIED, None, trials, tolerance, kind="nfold_convex")


def is_convex_fn(
    f, box: Box, trials: int = 10_000, tolerance: float = DEFAULT_TOLERANCE, rng_seed: int = 0
) -> ConvexityVerdict:
    """Look for a violation of joint convexity: one scalar ``lam`` for every coordinate."""
    _check_args(trials, tolerance)
    rng = np.random.default_rng(rng_seed)
    n = box.n
    p = box.lower + rng.random((trials, n)) * box.widths
    q = box.lower + rng.random((trials, n)) * box.widths
    lam = _sample_lambda(rng, trials)

    for start in range(0, trials, _CHUNK):
        sl = slice(start, min(start + _CHUNK, trials))
        lc = lam[sl, None]
        m = lc * p[sl] + (1.0 - lc) * q[sl]
        fp, fq, fm = eval_points(f, p[sl]), eval_points(f, q[sl]), eval_points(f, m)
        rhs = lam[sl] * fp + (1.0 - lam[sl]) * fq
        k = _first_violation(rhs - fm, tolerance)
        if k is not None:
            j = start + k
            witness = {
                "trial": j,
                "x": p[j].tolist(),
                "y": q[j].tolist(),
                "lambda": float(lam[j]),
                "point": m[k].tolist(),
                "lhs": float(fm[k]),
                "rhs": float(rhs[k]),
                "violation": float(fm[k] - rhs[k]),
            }
            return ConvexityVerdict(FALSIFIED, witness, j + 1, tolerance, kind="convex")
    return ConvexityVerdict(NOT_FALSIFIED, None, trials, tolerance, kind="convex")


def lemma_corner_majorization_gap(
    f, z, axis: int, x1: float, x2: float, y1: float, y2: float, box: Box | None = None
) -> float:
    """``[f(y1) + f(y2)] - [f(x1) + f(x2)]`` along ``axis`` (1-based) through ``z``.

    Requires ``y1 <= x1 <= x2 <= y2`` and ``x1 + x2 == y1 + y2`` (to 1e-12 relative);
    the gap is nonnegative whenever ``f`` is convex along that axis.
    """
    z = as_vector(z, "z")
    if not 1 <= axis <= z.size:
        raise DimensionError(f"axis {axis} out of range for dimension {z.size}")
    if not y1 <= x1 <= x2 <= y2:
        raise DomainError(f"need y1 <= x1 <= x2 <= y2, got {y1}, {x1}, {x2}, {y2}")
    scale = max(abs(x1) + abs(x2), abs(y1) + abs(y2))
    if abs((x1 + x2) - (y1 + y2)) > LEMMA_SUM_RTOL * scale:
        raise DomainError(f"need x1 + x2 == y1 + y2, got {x1 + x2} vs {y1 + y2}")
    if box is not None and not box.lower[axis - 1] <= y1 <= y2 <= box.upper[axis - 1]:
        raise DomainError(f"[{y1}, {y2}] leaves axis {axis} of {box}")
    pts = np.tile(z, (4, 1))
    pts[:, axis - 1] = (y1, y2, x1, x2)
    fy1, fy2, fx1, fx2 = eval_points(f, pts).tolist()
    return (fy1 + fy2) - (fx1 + fx2)


def admissible_quadruple(rng: np.random.Generator, lo: float, hi: float) -> tuple[float, float, float, float]:
    """Random ``(x1, x2, y1, y2)`` satisfying the majorization preconditions in ``[lo, hi]``."""
    y1, y2 = sorted(lo + rng.random(2) * (hi - lo))
    x1 = y1 + rng.random() * ((y1 + y2) / 2 - y1)
    x2 = min(max(y1 + y2 - x1, x1), y2)
    return float(x1), float(x2), float(y1), float(y2)
