"""Midpoint / mean / corner-average bounds for coordinatewise convex functions.

For ``f`` convex in each coordinate separately on the box ``[a, b]``::

    f((a + b) / 2)  <=  mean of f over [a, b]  <=  average of f over the 2^n corners

with both inequalities reversed for coordinatewise concave ``f``. The mean is a
quadrature estimate, so verification allows ``tolerance + quad_error`` of slack.
The weighted (Fejér) variant replaces the mean by ``int p f / int p`` for a
positive weight ``p`` symmetric about every axis midpoint; the discrete (Jensen)
variant replaces the box by finite point sets per coordinate.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .box import Box, _check_corner_dim, corner_array, midpoint, volume
from .errors import BudgetExceededError, DimensionError, DomainError, WeightRejectedError
from .functions import eval_point, eval_points
from .quadrature import QuadratureRule, check_symmetry, integrate, integrate_weighted

CONVEX = "convex"
CONCAVE = "concave"
_DIRECTION_LABEL = {CONVEX: "convex_sandwich", CONCAVE: "concave_reversed"}
DEFAULT_TOLERANCE = 1e-9
JENSEN_BUDGET = 10**7
WEIGHT_SUM_TOL = 1e-12
_CHUNK = 1 << 16


@dataclass(frozen=True)
class BoundsReport:
    lower: float
    mean: float
    upper: float
    quad_error: float
    left_margin: float
    right_margin: float
    verified: bool
    direction: str
    tolerance: float
    # verified only thanks to the tolerance + quad_error slack
    within_slack: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _make_report(lower: float, mean: float, upper: float, quad_error: float, tolerance: float, direction: str):
    if direction not in _DIRECTION_LABEL:
        raise DomainError(f"direction must be {CONVEX!r} or {CONCAVE!r}, got {direction!r}")
    left = mean - lower
    right = upper - mean
    slack = tolerance + quad_error
    if direction == CONVEX:
        verified = left >= -slack and right >= -slack
        tight = left < 0 or right < 0
    else:
        verified = left <= slack and right <= slack
        tight = left > 0 or right > 0
    return BoundsReport(
        lower=lower,
        mean=mean,
        upper=upper,
        quad_error=quad_error,
        left_margin=left,
        right_margin=right,
        verified=bool(verified),
        direction=_DIRECTION_LABEL[direction],
        tolerance=tolerance,
        within_slack=bool(verified and tight),
    )


def hh_lower(f, box: Box) -> float:
    """``f`` at the centre of the box."""
    return eval_point(f, midpoint(box))


def _corner_sum(f, box: Box) -> float:
    _check_corner_dim(box.n)
    total = 1 << box.n
    parts = []
    for start in range(0, total, _CHUNK):
        values = eval_points(f, corner_array(box, start, min(start + _CHUNK, total)))
        parts.append(math.fsum(values.tolist()))
    return parts[0] if len(parts) == 1 else math.fsum(parts)


def hh_upper(f, box: Box) -> float:
    """Average of ``f`` over the ``2^n`` corners of the box."""
    return math.ldexp(_corner_sum(f, box), -box.n)


def hh_sandwich(
    f,
    box: Box,
    rule: QuadratureRule | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    direction: str = CONVEX,
) -> BoundsReport:
    """Evaluate the midpoint <= mean <= corner-average chain and verify it."""
    lower = hh_lower(f, box)
    upper = hh_upper(f, box)
    res = integrate(f, box, rule, refine=True)
    vol = volume(box)
    return _make_report(lower, res.value / vol, upper, res.error_estimate / vol, tolerance, direction)


@dataclass(frozen=True, eq=False)
class JensenInstance:
    """Finite point sets and probability weights, one pair per coordinate."""

    points: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    def __post_init__(self):
        pts = tuple(np.array(p, dtype=float).reshape(-1) for p in self.points)
        ws = tuple(np.array(w, dtype=float).reshape(-1) for w in self.weights)
        if len(pts) == 0 or len(pts) != len(ws):
            raise DimensionError("need one point set and one weight vector per coordinate")
        for i, (p, w) in enumerate(zip(pts, ws), start=1):
            if p.size < 1 or p.size != w.size:
                raise DimensionError(f"coordinate {i}: {p.size} points but {w.size} weights")
            if not (np.all(np.isfinite(p)) and np.all(np.isfinite(w))):
                raise DomainError(f"coordinate {i}: non-finite point or weight")
            if np.any(w < 0):
                raise DomainError(f"coordinate {i}: negative weight")
            if abs(math.fsum(w.tolist()) - 1.0) > WEIGHT_SUM_TOL:
                raise DomainError(f"coordinate {i}: weights sum to {math.fsum(w.tolist())}, not 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def endpoints(cls, box: Box, t) -> "JensenInstance":
        """Two points ``{a_i, b_i}`` per axis with weights ``{t_i, 1 - t_i}``."""
        t = np.asarray(t, dtype=float)
        return cls(
            tuple(np.array([a, b]) for a, b in zip(box.lower, box.upper)),
            tuple(np.array([ti, 1.0 - ti]) for ti in t),
        )

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.points)

    def weighted_means(self) -> np.ndarray:
        # clamped to the hull of the points, matching ``interpolate``
        return np.array(
            [min(max(math.fsum((w * p).tolist()), p.min()), p.max()) for p, w in zip(self.points, self.weights)]
        )


def jensen_bound(f, instance: JensenInstance, budget: int = JENSEN_BUDGET) -> tuple[float, float, float]:
    """``(lhs, rhs, rhs - lhs)`` of the discrete coordinatewise Jensen inequality.

    ``lhs`` is ``f`` at the vector of per-coordinate weighted means; ``rhs`` sums
    ``prod_i alpha_{i, j_i} * f(x_{1, j_1}, ..., x_{n, j_n})`` over every index
    tuple. Tuples are enumerated with coordinate 1 varying fastest, the same order
    as box corners, so a two-point instance reproduces the corner computations.
    """
    sizes = instance.sizes
    total = math.prod(sizes)
    if total > budget:
        raise BudgetExceededError(f"{total} index tuples exceeds the budget of {budget}")
    lhs = eval_point(f, instance.weighted_means())
    strides = np.cumprod((1,) + sizes[:-1]).astype(np.int64)
    sizes_arr = np.array(sizes, dtype=np.int64)
    terms: list[float] = []
    for start in range(0, total, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (k[:, None] // strides) % sizes_arr
        pts = np.column_stack([instance.points[i][digits[:, i]] for i in range(instance.n)])
        w = np.ones(k.size)
        for i in range(instance.n):
            w = w * instance.weights[i][digits[:, i]]
        terms.extend((w * eval_points(f, pts)).tolist())
    rhs = math.fsum(terms)
    return lhs, rhs, rhs - lhs


def fejer_sandwich(
    f,
    p,
    box: Box,
    rule: QuadratureRule | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    direction: str = CONVEX,
    trials: int = 10_000,
    rng_seed: int = 0,
) -> BoundsReport:
    """Midpoint <= weighted mean <= corner average, with weight ``p``.

    ``p`` is screened for positivity and mirror symmetry first; a falsified weight
    raises :class:`WeightRejectedError` before any integral is computed.
    """
    verdict = check_symmetry(p, box, trials, tolerance, rng_seed)
    if verdict.falsified:
        raise WeightRejectedError(verdict.witness["reason"], verdict)
    lower = hh_lower(f, box)
    upper = hh_upper(f, box)
    num, den = integrate_weighted(f, p, box, rule, refine=True)
    mean = num.value / den.value
    quad_error = num.error_estimate / abs(den.value) + abs(mean) * den.error_estimate / abs(den.value)
    return _make_report(lower, mean, upper, quad_error, tolerance, direction)
