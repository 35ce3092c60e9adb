"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` (lines print even
without ``-s``) or ``python tests/test_acceptance.py``.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from hhbounds import Box, WeightRejectedError, parse
from hhbounds.bounds import JensenInstance, fejer_sandwich, hh_lower, hh_sandwich, hh_upper, jensen_bound
from hhbounds.cli import RunConfig, run
from hhbounds.convexity import (
    admissible_quadruple,
    is_convex_fn,
    is_nfold_convex_fn,
    lemma_corner_majorization_gap,
)
from hhbounds.corpus import CORPUS, CorpusSettings, run_corpus
from hhbounds.functions import Negated
from hhbounds.matrix import MatrixInterval, flatten, matrix_hh_sandwich, vec_product_2x2
from hhbounds.quadrature import gauss_legendre, integrate

try:
    from .conftest import NFOLD_CONVEX, random_box
except ImportError:  # executed as a script
    from conftest import NFOLD_CONVEX, random_box


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return emit


def test_01_sandwich_validity(report):
    assert len(NFOLD_CONVEX) >= 10 and {n for _, n in NFOLD_CONVEX} == {1, 2, 3, 4}
    rng = np.random.default_rng(2024)
    rule = gauss_legendre(16)
    start = time.perf_counter()
    failures = []
    for src, n in NFOLD_CONVEX:
        box = random_box(rng, n)
        r = hh_sandwich(parse(src), box, rule, tolerance=1e-9)
        slack = -(1e-9 + r.quad_error)
        if not (r.verified and r.left_margin >= slack and r.right_margin >= slack):
            failures.append(src)
    elapsed = time.perf_counter() - start
    report(1, "sandwich validity", not failures and elapsed < 30,
           f"{len(NFOLD_CONVEX)} functions, {elapsed:.2f}s, failures={failures}")


def test_02_sharpness(report):
    worst = 0.0
    for n in (1, 2, 3):
        f = parse(" * ".join(f"x{i + 1}" for i in range(n)))
        r = hh_sandwich(f, Box.unit(n), gauss_legendre(16))
        worst = max(worst, abs(r.lower - r.mean), abs(r.mean - r.upper))
    report(2, "sharpness of the product", worst <= 1e-10, f"max |margin| = {worst:.3e}")


def test_03_analytic_oracle(report):
    r = hh_sandwich(parse("x1^2 + x2^2"), Box.unit(2), gauss_legendre(16))
    # corners (0,0),(0,1),(1,0),(1,1) give 0,1,1,2
    corner_avg = (0 + 1 + 1 + 2) / 4
    ok = abs(r.mean - 2 / 3) <= 1e-10 and r.lower == 0.5 and r.upper == corner_avg == 1.0
    report(3, "analytic oracle for x1^2 + x2^2", ok, f"lower={r.lower!r} mean={r.mean!r} upper={r.upper!r}")


ONE_D = [("exp(x1)", math.exp, (-1.0, 1.5)), ("x1^4 - 3*x1", lambda x: x**4 - 3 * x, (0.2, 1.7)),
         ("x1^2", lambda x: x * x, (-2.0, 3.0))]
TWO_D = [("x1*x2", lambda x, y: x * y, (0.0, 2.0, 0.0, 1.0)),
         ("x1^2*x2 + exp(x2)", lambda x, y: x * x * y + math.exp(y), (0.3, 1.1, 0.5, 1.9)),
         ("exp(x1)*x2^2 + x1^2", lambda x, y: math.exp(x) * y * y + x * x, (-0.5, 0.5, 1.0, 2.0))]


def classical_1d(g, a, b):
    mean = sp_integrate.quad(g, a, b, epsabs=1e-13, epsrel=1e-13)[0] / (b - a)
    return g((a + b) / 2), mean, (g(a) + g(b)) / 2


def rectangle_2d(g, a, b, c, d):
    integral = sp_integrate.dblquad(lambda y, x: g(x, y), a, b, c, d, epsabs=1e-13, epsrel=1e-13)[0]
    corners = (g(a, c) + g(a, d) + g(b, c) + g(b, d)) / 4
    return g((a + b) / 2, (c + d) / 2), integral / ((b - a) * (d - c)), corners


def test_04_special_cases(report):
    worst = 0.0
    for src, g, (a, b) in ONE_D:
        r = hh_sandwich(parse(src), Box([a], [b]), gauss_legendre(16))
        for got, ref in zip((r.lower, r.mean, r.upper), classical_1d(g, a, b)):
            worst = max(worst, abs(got - ref))
    for src, g, (a, b, c, d) in TWO_D:
        r = hh_sandwich(parse(src), Box([a, c], [b, d]), gauss_legendre(16))
        for got, ref in zip((r.lower, r.mean, r.upper), rectangle_2d(g, a, b, c, d)):
            worst = max(worst, abs(got - ref))
    report(4, "n=1 and n=2 special cases term for term", worst <= 1e-12, f"max abs diff = {worst:.3e}")


def brute_force_jensen(f, points, weights):
    lhs = f(np.array([float(np.dot(w, p)) for p, w in zip(points, weights)]))
    rhs = 0.0
    for idx in itertools.product(*(range(len(p)) for p in points)):
        w = 1.0
        for i, j in enumerate(idx):
            w *= weights[i][j]
        rhs += w * f(np.array([points[i][j] for i, j in enumerate(idx)]))
    return rhs - lhs


def test_05_jensen(report):
    rng = np.random.default_rng(5)
    pool = [(src, n) for src, n in NFOLD_CONVEX if n <= 3]
    worst_brute = worst_lib = np.inf
    max_disagree = 0.0
    for k in range(1200):
        src, n = pool[k % len(pool)]
        f = parse(src)
        box = random_box(rng, n)
        sizes = rng.integers(1, 5, size=n)
        points = [box.lower[i] + rng.random(m) * box.widths[i] for i, m in enumerate(sizes)]
        weights = [rng.dirichlet(np.ones(m)) for m in sizes]
        brute = brute_force_jensen(f, points, weights)
        _, _, gap = jensen_bound(f, JensenInstance(points, weights))
        worst_brute, worst_lib = min(worst_brute, brute), min(worst_lib, gap)
        max_disagree = max(max_disagree, abs(brute - gap))
    endpoint_exact = True
    for src, n in NFOLD_CONVEX:
        f = parse(src)
        box = random_box(rng, n)
        lhs, rhs, _ = jensen_bound(f, JensenInstance.endpoints(box, [0.5] * n))
        endpoint_exact &= lhs == hh_lower(f, box) and rhs == hh_upper(f, box)
    ok = worst_brute >= -1e-9 and worst_lib >= -1e-9 and max_disagree <= 1e-9 and endpoint_exact
    report(5, "discrete Jensen bound", ok,
           f"1200 instances, min gap {min(worst_brute, worst_lib):.3e}, endpoint exact={endpoint_exact}")


def test_06_fejer(report, monkeypatch):
    f, box, rule = parse("exp(x1)*x2^2 + x1^2"), Box([0, 1], [1, 3]), gauss_legendre(16)
    a = fejer_sandwich(f, parse("1"), box, rule)
    b = hh_sandwich(f, box, rule)
    same = (a.lower == b.lower and a.upper == b.upper and a.verified == b.verified
            and abs(a.mean - b.mean) <= a.quad_error + b.quad_error + 1e-14)

    w = fejer_sandwich(parse("x1^2"), parse("x1*(1 - x1)"), Box.unit(1), rule)
    weighted = abs(w.mean - 0.3) <= 1e-10 and 0.25 <= w.mean <= 0.5 and w.verified

    import hhbounds.bounds as bounds_mod

    calls = []
    monkeypatch.setattr(bounds_mod, "integrate_weighted", lambda *a, **k: calls.append(1))
    try:
        fejer_sandwich(parse("x1^2"), parse("x1"), Box.unit(1), rule)
        rejected = False
    except WeightRejectedError as exc:
        rejected = "asymmetric" in str(exc) and not calls
    report(6, "weighted (symmetric weight) chain", same and weighted and rejected,
           f"p=1 matches={same}, weighted mean={w.mean!r}, asymmetric rejected first={rejected}")


def test_07_concave_reversal(report):
    rng = np.random.default_rng(7)
    rule = gauss_legendre(16)
    cases = [(parse(src), random_box(rng, n), "convex") for src, n in NFOLD_CONVEX]
    cases += [(parse(e.fn), Box.from_intervals(e.box), e.expect.get("direction", "convex"))
              for e in CORPUS if e.kind in ("sandwich", "matrix")]
    flip = {"convex": "concave", "concave": "convex"}
    worst = 0.0
    for f, box, direction in cases:
        pos = hh_sandwich(f, box, rule, direction=direction)
        neg = hh_sandwich(Negated(f), box, rule, direction=flip[direction])
        if not (pos.verified and neg.verified):
            worst = math.inf
        worst = max(worst, abs(neg.left_margin + pos.left_margin), abs(neg.right_margin + pos.right_margin))
    report(7, "concave reversal", worst <= 1e-12, f"{len(cases)} functions, max |margin sum| = {worst:.3e}")


def test_08_lemma(report):
    rng = np.random.default_rng(8)
    worst = np.inf
    count = 10_000
    for k in range(count):
        src, n = NFOLD_CONVEX[k % len(NFOLD_CONVEX)]
        box = random_box(rng, n)
        axis = int(rng.integers(1, n + 1))
        z = box.lower + rng.random(n) * box.widths
        x1, x2, y1, y2 = admissible_quadruple(rng, box.lower[axis - 1], box.upper[axis - 1])
        worst = min(worst, lemma_corner_majorization_gap(parse(src), z, axis, x1, x2, y1, y2, box))
    report(8, "corner majorization lemma", worst >= -1e-9, f"{count} quadruples, min gap {worst:.3e}")


def test_09_matrix(report):
    f = parse("x1^2 + x2^2 + x3^2 + x4^2")
    iv = MatrixInterval(np.zeros((2, 2)), np.ones((2, 2)))
    r = matrix_hh_sandwich(f, iv, gauss_legendre(8))
    plain = integrate(f, Box.unit(4), gauss_legendre(8))
    chain = (r.lower == 1.0 and r.upper == 2.0 and abs(r.mean - 4 / 3) <= 1e-8 and r.verified
             and plain.evaluations == 4096 and abs(plain.value - 4 / 3) <= 1e-8)

    rng = np.random.default_rng(9)
    exact = True
    for _ in range(10_000):
        M, N = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
        ref = [[M[i, 0] * N[0, j] + M[i, 1] * N[1, j] for j in range(2)] for i in range(2)]
        exact &= vec_product_2x2(flatten(M), flatten(N)).tolist() == flatten(ref).tolist()
    report(9, "matrix interval chain and 2x2 product identity", chain and exact,
           f"mean={r.mean!r}, m=8 evaluations={plain.evaluations}, product exact={exact}")


def test_10_separation(report):
    f, box = parse("x1*x2"), Box.unit(2)
    nfold = is_nfold_convex_fn(f, box, trials=100_000, rng_seed=0)
    joint = is_convex_fn(f, box, trials=1000, rng_seed=0)
    ok = not nfold.falsified and nfold.trials_run == 100_000 and joint.falsified and joint.trials_run <= 1000
    report(10, "coordinatewise vs joint convexity separation", ok,
           f"nfold {nfold.status} after {nfold.trials_run}, joint {joint.status} at trial {joint.trials_run}")


def test_11_quadrature_exactness(report):
    from fractions import Fraction

    rng = np.random.default_rng(11)
    worst = 0.0
    for m in (2, 4, 8):
        for n in (1, 2, 3):
            box = Box(rng.uniform(-2, 0, n), rng.uniform(0.5, 2, n))
            for degrees in itertools.product(range(2 * m), repeat=n):
                if n == 3 and rng.random() > 0.05:
                    continue  # a random slice of the m^3 cube of degree tuples
                exact = Fraction(1)
                for (a, b), k in zip(box.intervals(), degrees):
                    a, b = Fraction(a), Fraction(b)
                    exact *= (b ** (k + 1) - a ** (k + 1)) / (k + 1)
                exact = float(exact)
                f = parse(" * ".join(f"x{i + 1}^{k}" for i, k in enumerate(degrees)))
                got = integrate(f, box, gauss_legendre(m)).value
                worst = max(worst, abs(got - exact) / max(abs(exact), 1e-300))
    report(11, "Gauss-Legendre polynomial exactness", worst <= 1e-12, f"max rel err = {worst:.3e}")


def test_12_determinism(report):
    settings = CorpusSettings(seed=0, tolerance=1e-9, m=16)
    a = json.dumps(run_corpus(settings), sort_keys=True)
    b = json.dumps(run_corpus(settings), sort_keys=True)
    cli_a, cli_b = run(RunConfig(command="corpus")), run(RunConfig(command="corpus"))
    ok = a == b and cli_a == cli_b
    report(12, "byte-identical corpus reports", ok, f"{len(a)} bytes, cli {len(cli_a[1])} bytes")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
