"""Scalar functions of square matrices, treated as functions on R^(n^2).

A matrix is identified with its row-major entry vector, so ``[[1, 2], [3, 4]]``
is the point ``(1, 2, 3, 4)`` and the elementwise interval ``[A, B]`` is the box
with ``lower = flatten(A)`` and ``upper = flatten(B)``. Expressions over a matrix
use ``x1 .. x{n^2}`` in that same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import CONVEX, DEFAULT_TOLERANCE, BoundsReport, hh_sandwich
from .box import MAX_CORNER_DIM, Box
from .errors import DimensionError, DomainError
from .quadrature import QuadratureRule


def as_square(M, name: str = "matrix") -> np.ndarray:
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} has non-finite entries")
    return M


def flatten(M) -> np.ndarray:
    return as_square(M).reshape(-1)


def unflatten(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size or n == 0:
        raise DimensionError(f"{v.size} entries do not form a square matrix")
    return v.reshape(n, n).copy()


def vec_product_2x2(u, v) -> np.ndarray:
    """Product of two 2x2 matrices given and returned as row-major 4-vectors."""
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.size != 4 or v.size != 4:
        raise DimensionError(f"expected two vectors of length 4, got {u.size} and {v.size}")
    a, b, c, d = u
    p, q, x, y = v
    return np.array([a * p + b * x, a * q + b * y, c * p + d * x, c * q + d * y])


@dataclass(frozen=True, eq=False)
class MatrixInterval:
    """``[A, B]`` with ``a_ij < b_ij`` for every entry."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = as_square(self.A, "A"), as_square(self.B, "B")
        if A.shape != B.shape:
            raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but B is {B.shape[0]}x{B.shape[0]}")
        if not np.all(A < B):
            raise DomainError("matrix interval needs A < B entrywise")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]


def matrix_leq(A, B) -> bool:
    A, B = as_square(A, "A"), as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionError("matrices differ in size")
    return bool(np.all(A <= B))


def matrix_interval_to_box(iv: MatrixInterval) -> Box:
    return Box(flatten(iv.A), flatten(iv.B))


class MatrixFunction:
    """Adapter turning ``f(matrix) -> float`` into a function of the flattened entries."""

    def __init__(self, f, n: int):
        self.f = f
        self.n = n

    def __call__(self, x) -> float:
        return float(self.f(np.asarray(x, dtype=float).reshape(self.n, self.n)))


def matrix_hh_sandwich(
    f,
    iv: MatrixInterval,
    rule: QuadratureRule | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    direction: str = CONVEX,
) -> BoundsReport:
    """Midpoint / mean / corner-average chain on ``[A, B]``.

    ``f`` is either an expression in ``x1 .. x{n^2}`` (row-major entries) or a
    callable taking an ``n x n`` array.
    """
    if iv.n * iv.n > MAX_CORNER_DIM:
        raise DimensionError(f"{iv.n}x{iv.n} matrices have too many corners to enumerate")
    g = f if hasattr(f, "batch") else MatrixFunction(f, iv.n)
    return hh_sandwich(g, matrix_interval_to_box(iv), rule, tolerance, direction)
