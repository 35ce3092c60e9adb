"""Tensor-product Gauss-Legendre quadrature on boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .box import Box
from .errors import BudgetExceededError, DomainError
from .functions import eval_points
from .verdict import FALSIFIED, NOT_FALSIFIED, ConvexityVerdict

DEFAULT_NODES = 16
EVALUATION_BUDGET = 10**8
_CHUNK = 1 << 16


@dataclass(frozen=True)
class QuadratureRule:
    nodes_per_axis: int
    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.nodes_per_axis < 1:
            raise DomainError("a rule needs at least one node per axis")
        if not len(self.nodes) == len(self.weights) == self.nodes_per_axis:
            raise DomainError("nodes and weights must both have nodes_per_axis entries")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def _legendre(m: int, x: float) -> tuple[float, float]:
    """``P_m(x)`` and ``P_m'(x)`` by the three-term recurrence."""
    p0, p1 = 1.0, x
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, m * (x * p1 - p0) / (x * x - 1.0)


def _legendre_newton(m: int) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.empty(m)
    weights = np.empty(m)
    for i in range((m + 1) // 2):
        x = math.cos(math.pi * (i + 0.75) / (m + 0.5))
        for _ in range(100):
            p, dp = _legendre(m, x)
            dx = p / dp
            x -= dx
            if abs(dx) <= 1e-15:
                break
        _, dp = _legendre(m, x)
        nodes[i], nodes[m - 1 - i] = -x, x
        weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp)
    if m % 2 == 1:
        nodes[m // 2] = 0.0
    # the weights of an exact rule sum to 2; renormalizing removes the accumulated rounding
    weights *= 2.0 / math.fsum(weights.tolist())
    return nodes, weights


@lru_cache(maxsize=None)
def gauss_legendre(m: int = DEFAULT_NODES) -> QuadratureRule:
    """``m``-point Gauss-Legendre rule on ``[-1, 1]`` (exact to degree ``2m - 1``)."""
    if m < 1:
        raise DomainError("m must be >= 1")
    nodes, weights = _legendre_newton(m)
    return QuadratureRule(m, tuple(nodes.tolist()), tuple(weights.tolist()))


def _axis_tables(box: Box, rule: QuadratureRule) -> tuple[list[np.ndarray], list[np.ndarray]]:
    nodes = np.array(rule.nodes)
    weights = np.array(rule.weights)
    half = box.widths / 2.0
    mid = (box.lower + box.upper) / 2.0
    return (
        [mid[i] + half[i] * nodes for i in range(box.n)],
        [half[i] * weights for i in range(box.n)],
    )


def _check_budget(m: int, n: int, budget: int):
    if m**n > budget:
        raise BudgetExceededError(f"{m}^{n} = {m**n} quadrature points exceeds the budget of {budget}")


def _grid_chunks(box: Box, rule: QuadratureRule):
    """Yield ``(points, weights)`` blocks covering the tensor grid in a fixed order."""
    xs, ws = _axis_tables(box, rule)
    m, n = rule.nodes_per_axis, box.n
    total = m**n
    strides = m ** np.arange(n, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (k[:, None] // strides) % m
        pts = np.column_stack([xs[i][digits[:, i]] for i in range(n)])
        w = np.ones(k.size)
        for i in range(n):
            w = w * ws[i][digits[:, i]]
        yield pts, w


def _tensor_sum(f, box: Box, rule: QuadratureRule, p=None) -> tuple[float, float, int]:
    num_parts, den_parts = [], []
    count = 0
    for pts, w in _grid_chunks(box, rule):
        fv = eval_points(f, pts)
        if p is None:
            num_parts.append(float(np.sum(w * fv)))
        else:
            pv = eval_points(p, pts)
            num_parts.append(float(np.sum(w * (pv * fv))))
            den_parts.append(float(np.sum(w * pv)))
        count += pts.shape[0]
    return math.fsum(num_parts), math.fsum(den_parts), count


def _refined(rule: QuadratureRule) -> QuadratureRule:
    return gauss_legendre(2 * rule.nodes_per_axis)


def integrate(
    f, box: Box, rule: QuadratureRule | None = None, refine: bool = False, budget: int = EVALUATION_BUDGET
) -> QuadratureResult:
    """Integral of ``f`` over ``box`` with the ``m``-point tensor rule.

    With ``refine`` the integral is recomputed on ``2m`` points per axis and
    ``error_estimate`` is the difference; ``value`` stays the ``m``-point result.
    """
    rule = rule or gauss_legendre()
    m, n = rule.nodes_per_axis, box.n
    _check_budget(m, n, budget)
    if refine:
        _check_budget(2 * m, n, budget)
    value, _, count = _tensor_sum(f, box, rule)
    err = 0.0
    if refine:
        fine, _, extra = _tensor_sum(f, box, _refined(rule))
        err = abs(value - fine)
        count += extra
    return QuadratureResult(value, err, count)


def integrate_weighted(
    f, p, box: Box, rule: QuadratureRule | None = None, refine: bool = False, budget: int = EVALUATION_BUDGET
) -> tuple[QuadratureResult, QuadratureResult]:
    """``(integral of p*f, integral of p)`` over ``box`` on a shared node set."""
    rule = rule or gauss_legendre()
    m, n = rule.nodes_per_axis, box.n
    _check_budget(m, n, budget)
    if refine:
        _check_budget(2 * m, n, budget)
    num, den, count = _tensor_sum(f, box, rule, p)
    num_err = den_err = 0.0
    if refine:
        fnum, fden, extra = _tensor_sum(f, box, _refined(rule), p)
        num_err, den_err = abs(num - fnum), abs(den - fden)
        count += extra
    if den <= 0.0:
        raise DomainError(f"integral of the weight is {den}; the weight must be positive")
    return QuadratureResult(num, num_err, count), QuadratureResult(den, den_err, count)


def check_symmetry(
    p, box: Box, trials: int = 10_000, tolerance: float = 1e-9, rng_seed: int = 0
) -> ConvexityVerdict:
    """Try to falsify positivity of ``p`` and its mirror symmetry about every axis midpoint."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    n = box.n
    x = box.lower + rng.random((trials, n)) * box.widths
    axes = rng.integers(0, n, size=trials)
    mirrored = x.copy()
    rows = np.arange(trials)
    mirrored[rows, axes] = box.lower[axes] + box.upper[axes] - x[rows, axes]
    px, pm = eval_points(p, x), eval_points(p, mirrored)
    asym = np.abs(px - pm) > tolerance
    nonpos = px <= 0.0
    bad = np.flatnonzero(asym | nonpos)
    if bad.size:
        k = int(bad[0])
        witness = {
            "trial": k,
            "reason": "non-positive" if nonpos[k] else "asymmetric",
            "axis": int(axes[k]) + 1,
            "point": x[k].tolist(),
            "mirror": mirrored[k].tolist(),
            "p_point": float(px[k]),
            "p_mirror": float(pm[k]),
        }
        return ConvexityVerdict(FALSIFIED, witness, k + 1, tolerance, kind="weight_symmetry")
    return ConvexityVerdict(NOT_FALSIFIED, None, trials, tolerance, kind="weight_symmetry")
