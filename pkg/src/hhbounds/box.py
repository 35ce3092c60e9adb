"""Hypercuboid geometry: product order, corners, componentwise interpolation.

Points are 1-D float64 numpy arrays. A corner of ``[a, b]`` is addressed by a mask
of ``n`` booleans, bit ``i`` picking ``b_i`` when set and ``a_i`` otherwise. Corners
are enumerated with coordinate 1 as the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, DomainError, InconclusiveError
from .verdict import FALSIFIED, NOT_FALSIFIED, ConvexityVerdict

MAX_CORNER_DIM = 24

CornerMask = tuple[bool, ...]


def as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.array(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {v.shape}")
    if v.size < 1:
        raise DimensionError(f"{name} must have at least one coordinate")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite coordinates: {v.tolist()}")
    v.setflags(write=False)
    return v


def _same_dim(x: np.ndarray, y: np.ndarray):
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")


def as_weight(t, n: int | None = None) -> np.ndarray:
    t = as_vector(t, "t")
    if n is not None and t.size != n:
        raise DimensionError(f"weight has dimension {t.size}, expected {n}")
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError(f"weight t must lie in [0,1]^n, got {t.tolist()}")
    return t


@dataclass(frozen=True, eq=False)
class Box:
    """The hypercuboid ``[lower, upper]`` with ``lower_i < upper_i`` on every axis."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lower, "lower")
        hi = as_vector(self.upper, "upper")
        _same_dim(lo, hi)
        if not np.all(lo < hi):
            bad = [i + 1 for i in np.flatnonzero(~(lo < hi))]
            raise DomainError(f"box must satisfy lower < upper strictly; fails on axes {bad}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_intervals(cls, intervals: Sequence[Sequence[float]]) -> "Box":
        pairs = [tuple(iv) for iv in intervals]
        if any(len(p) != 2 for p in pairs):
            raise DomainError("each interval needs exactly two endpoints")
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @classmethod
    def unit(cls, n: int) -> "Box":
        return cls(np.zeros(n), np.ones(n))

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def intervals(self) -> list[tuple[float, float]]:
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.lower <= x) and np.all(x <= self.upper))

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))

    def __repr__(self):
        return f"Box({self.intervals()})"


def product_order_leq(x, y) -> bool:
    """``x <= y`` in the componentwise (partial) order."""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    _same_dim(x, y)
    return bool(np.all(x <= y))


def mask_from_index(k: int, n: int) -> CornerMask:
    return tuple(bool((k >> i) & 1) for i in range(n))


def mask_to_index(mask: CornerMask) -> int:
    return sum(1 << i for i, bit in enumerate(mask) if bit)


def _check_mask(mask, n: int) -> CornerMask:
    mask = tuple(bool(b) for b in mask)
    if len(mask) != n:
        raise DimensionError(f"mask has {len(mask)} bits, box has dimension {n}")
    return mask


def corner(box: Box, mask: CornerMask) -> np.ndarray:
    mask = _check_mask(mask, box.n)
    return as_vector(np.where(mask, box.upper, box.lower))


def _check_corner_dim(n: int):
    if n > MAX_CORNER_DIM:
        raise DimensionError(f"corner enumeration limited to n <= {MAX_CORNER_DIM}, got n = {n}")


def corners(box: Box) -> Iterator[tuple[CornerMask, np.ndarray]]:
    """All ``2^n`` corners of ``box`` in mask order."""
    _check_corner_dim(box.n)
    for k in range(1 << box.n):
        mask = mask_from_index(k, box.n)
        yield mask, corner(box, mask)


def mixed_corner_array(x: np.ndarray, y: np.ndarray, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows ``start..stop`` of the corner table of the pair ``(x, y)``.

    Row ``k`` takes ``y_i`` where bit ``i`` of ``k`` is set and ``x_i`` otherwise.
    """
    n = x.size
    _check_corner_dim(n)
    stop = (1 << n) if stop is None else stop
    k = np.arange(start, stop, dtype=np.int64)
    bits = ((k[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
    return np.where(bits, y, x)


def corner_array(box: Box, start: int = 0, stop: int | None = None) -> np.ndarray:
    return mixed_corner_array(box.lower, box.upper, start, stop)


def interpolate(t, x, y) -> np.ndarray:
    """Componentwise ``t_i x_i + (1 - t_i) y_i``."""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    _same_dim(x, y)
    t = as_weight(t, x.size)
    # rounding can push t x + (1 - t) y a hair outside [min, max]; clamp it back
    return as_vector(np.clip(t * x + (1.0 - t) * y, np.minimum(x, y), np.maximum(x, y)))


def corner_weight(t, mask: CornerMask) -> float:
    """Product weight of one corner: ``t_i`` on lower-endpoint bits, ``1 - t_i`` on upper ones."""
    t = as_weight(t)
    mask = _check_mask(mask, t.size)
    w = 1.0
    for ti, bit in zip(t.tolist(), mask):
        w *= (1.0 - ti) if bit else ti
    return w


def corner_weights(t, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Vector of :func:`corner_weight` over masks ``start..stop`` in mask order."""
    t = as_weight(t)
    n = t.size
    _check_corner_dim(n)
    stop = (1 << n) if stop is None else stop
    k = np.arange(start, stop, dtype=np.int64)
    w = np.ones(k.size)
    # multiply in coordinate order so the result matches corner_weight bit for bit
    for i in range(n):
        bit = ((k >> i) & 1).astype(bool)
        w = w * np.where(bit, 1.0 - t[i], t[i])
    return w


def midpoint(box: Box) -> np.ndarray:
    return as_vector((box.lower + box.upper) / 2.0)


def volume(box: Box) -> float:
    v = 1.0
    for w in box.widths.tolist():
        v *= w
    return v


def split(box: Box, axis: int, at: float) -> tuple[Box, Box]:
    """Cut ``box`` across ``axis`` (1-based) at ``at``; both halves stay strict."""
    i = axis - 1
    if not box.lower[i] < at < box.upper[i]:
        raise DomainError(f"split point {at} not interior to axis {axis}")
    hi = box.upper.copy()
    hi[i] = at
    lo = box.lower.copy()
    lo[i] = at
    return Box(box.lower, hi), Box(lo, box.upper)


def _sample_weight(rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
    # a quarter of coordinates pinned at 0, a quarter at 1: extreme corners of the
    # spanned box are where membership failures show up
    u = rng.random(size)
    t = rng.random(size)
    t[u < 0.25] = 0.0
    t[(u >= 0.25) & (u < 0.5)] = 1.0
    return t


def is_nfold_convex_set(
    membership: Callable[[np.ndarray], bool],
    bounding: Box,
    trials: int = 10_000,
    rng_seed: int = 0,
    sample_budget: int | None = None,
) -> ConvexityVerdict:
    """Try to falsify closure of a set under componentwise interpolation.

    Members are found by rejection sampling in ``bounding``; pairs ``x, y`` and a
    weight ``t`` with independent coordinates are drawn and ``t x + (1 - t) y`` is
    tested for membership.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    n = bounding.n
    need = 2 * trials
    budget = sample_budget if sample_budget is not None else 1000 * need
    members: list[np.ndarray] = []
    drawn = 0
    while len(members) < need and drawn < budget:
        batch = min(max(need, 1024), budget - drawn)
        cand = bounding.lower + rng.random((batch, n)) * bounding.widths
        drawn += batch
        for p in cand:
            if membership(p):
                members.append(p)
                if len(members) == need:
                    break
    if not members:
        raise InconclusiveError(f"no member of the set found in {drawn} samples")
    pool = np.array(members)
    if len(members) < need:
        pool = pool[rng.integers(0, len(members), size=need)]
    xs, ys = pool[:trials], pool[trials:need]
    ts = _sample_weight(rng, (trials, n))
    zs = ts * xs + (1.0 - ts) * ys
    for k in range(trials):
        if not membership(zs[k]):
            witness = {
                "trial": k,
                "x": xs[k].tolist(),
                "y": ys[k].tolist(),
                "t": ts[k].tolist(),
                "point": zs[k].tolist(),
            }
            return ConvexityVerdict(FALSIFIED, witness, k + 1, 0.0, kind="nfold_convex_set")
    return ConvexityVerdict(NOT_FALSIFIED, None, trials, 0.0, kind="nfold_convex_set")
