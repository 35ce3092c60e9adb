import numpy as np
import pytest
from hypothesis import strategies as st

from hhbounds import Box, parse

# (source, dimension) pairs that are convex in each coordinate on any box
# inside the positive orthant; used by several property tests.
NFOLD_CONVEX = [
    ("x1^2", 1),
    ("exp(x1)", 1),
    ("x1^4 - 3*x1", 1),
    ("abs(x1 - 0.3)", 1),
    ("x1*x2", 2),
    ("x1^2 + x2^2", 2),
    ("x1^2*x2 + exp(x2)", 2),
    ("max(x1, x2)", 2),
    ("x1^2*x2^2 - x1*x2", 2),
    ("exp(x1)*x2^2 + x1^2", 2),
    ("x1*x2*x3", 3),
    ("x1^2 + x2*x3 + exp(x3)", 3),
    ("x1*x2*x3*x4", 4),
    ("x1^2 + x2^2 + x3^2 + x4^2 + x1*x2*x3*x4", 4),
]


@pytest.fixture(params=NFOLD_CONVEX, ids=[s for s, _ in NFOLD_CONVEX])
def nfold_convex(request):
    src, n = request.param
    return parse(src), n


def random_box(rng: np.random.Generator, n: int, lo: float = 0.1, hi: float = 2.0) -> Box:
    a = rng.uniform(lo, hi, n)
    w = rng.uniform(0.2, 1.5, n)
    return Box(a, a + w)


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0)


@st.composite
def boxes(draw, n=None, max_dim=4):
    n = n or draw(st.integers(1, max_dim))
    lo = draw(st.lists(finite, min_size=n, max_size=n))
    w = draw(st.lists(st.floats(0.01, 100.0), min_size=n, max_size=n))
    return Box(lo, [a + b for a, b in zip(lo, w)])
