import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hhbounds import Box, DimensionError, DomainError, parse, product_order_leq, volume
from hhbounds.bounds import hh_sandwich
from hhbounds.matrix import (
    MatrixInterval,
    flatten,
    matrix_hh_sandwich,
    matrix_interval_to_box,
    matrix_leq,
    unflatten,
    vec_product_2x2,
)
from hhbounds.quadrature import gauss_legendre, integrate

from .conftest import finite

ZERO = np.zeros((2, 2))
ONES = np.ones((2, 2))
SUM_SQUARES = parse("x1^2 + x2^2 + x3^2 + x4^2")


class TestFlatten:
    def test_row_major(self):
        assert flatten([[1, 2], [3, 4]]).tolist() == [1, 2, 3, 4]
        assert flatten(np.eye(2)).tolist() == [1, 0, 0, 1]

    @given(st.integers(1, 4).flatmap(lambda n: arrays(float, (n, n), elements=finite)))
    def test_round_trip(self, M):
        assert np.array_equal(unflatten(flatten(M)), M)
        assert np.array_equal(flatten(unflatten(M.reshape(-1))), M.reshape(-1))

    def test_errors(self):
        with pytest.raises(DimensionError):
            flatten([[1, 2, 3], [4, 5, 6]])
        with pytest.raises(DimensionError):
            unflatten([1, 2, 3])
        with pytest.raises(DomainError):
            flatten([[1, np.nan], [0, 1]])


class TestVecProduct:
    def test_examples(self):
        assert vec_product_2x2([1, 2, 3, 4], [5, 6, 7, 8]).tolist() == [19, 22, 43, 50]
        assert vec_product_2x2([1, 0, 0, 1], [3, -1, 2.5, 7]).tolist() == [3, -1, 2.5, 7]
        assert vec_product_2x2([0, 0, 0, 0], [3, -1, 2.5, 7]).tolist() == [0, 0, 0, 0]

    def test_random_pairs_match_textbook_product(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            M, N = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
            ref = [[M[i, 0] * N[0, j] + M[i, 1] * N[1, j] for j in range(2)] for i in range(2)]
            assert vec_product_2x2(flatten(M), flatten(N)).tolist() == flatten(ref).tolist()

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            vec_product_2x2([1, 2, 3], [1, 2, 3, 4])


class TestInterval:
    def test_unit(self):
        assert matrix_interval_to_box(MatrixInterval(ZERO, ONES)) == Box.unit(4)

    def test_row_major_mapping(self):
        box = matrix_interval_to_box(MatrixInterval([[0, 1], [2, 3]], [[1, 2], [3, 4]]))
        assert box.intervals() == [(0, 1), (1, 2), (2, 3), (3, 4)]

    def test_volume_is_entrywise_length(self):
        A = np.array([[0, -1], [2, 0.5]])
        B = np.array([[2, 1], [5, 0.75]])
        assert volume(matrix_interval_to_box(MatrixInterval(A, B))) == np.prod(B - A)

    def test_strict_order_required(self):
        with pytest.raises(DomainError):
            MatrixInterval(ZERO, [[1, 1], [0, 1]])
        with pytest.raises(DimensionError):
            MatrixInterval(ZERO, np.ones((3, 3)))

    @given(arrays(float, (3, 3), elements=finite), arrays(float, (3, 3), elements=finite))
    def test_order_agrees_with_product_order(self, A, B):
        assert matrix_leq(A, B) == product_order_leq(flatten(A), flatten(B))


class TestSandwich:
    def test_sum_of_squares(self):
        r = matrix_hh_sandwich(SUM_SQUARES, MatrixInterval(ZERO, ONES), gauss_legendre(8))
        assert (r.lower, r.upper) == (1.0, 2.0)
        assert r.mean == pytest.approx(4 / 3, abs=1e-8)
        assert r.verified

    def test_four_thousand_evaluations_at_m8(self):
        res = integrate(SUM_SQUARES, Box.unit(4), gauss_legendre(8))
        assert res.evaluations == 4096
        assert res.value == pytest.approx(4 / 3, abs=1e-8)

    def test_product_is_sharp(self):
        r = matrix_hh_sandwich(parse("x1*x2*x3*x4"), MatrixInterval(ZERO, ONES), gauss_legendre(4))
        for v in (r.lower, r.mean, r.upper):
            assert v == pytest.approx(1 / 16, abs=1e-14)
        assert abs(r.left_margin) <= 1e-12 and abs(r.right_margin) <= 1e-12

    def test_single_entry(self):
        iv = MatrixInterval([[0, 1], [2, 3]], [[1, 2], [3, 4]])
        r = matrix_hh_sandwich(parse("x1"), iv, gauss_legendre(2))
        for v in (r.lower, r.mean, r.upper):
            assert v == pytest.approx(0.5, abs=1e-14)

    def test_matrix_callable(self):
        iv = MatrixInterval(ZERO, ONES)
        r = matrix_hh_sandwich(lambda X: float(np.sum(X * X)), iv, gauss_legendre(3))
        assert (r.lower, r.upper) == (1.0, 2.0)
        assert r.mean == pytest.approx(4 / 3, abs=1e-13)

    def test_bit_identical_to_flat_sandwich(self):
        iv = MatrixInterval([[0, -1], [0.5, 1]], [[1, 2], [2, 3]])
        f = parse("exp(x1) * x4^2 + x2^2 * x3")
        rule = gauss_legendre(5)
        assert matrix_hh_sandwich(f, iv, rule) == hh_sandwich(f, matrix_interval_to_box(iv), rule)

    def test_too_many_corners(self):
        with pytest.raises(DimensionError):
            matrix_hh_sandwich(parse("x1"), MatrixInterval(np.zeros((5, 5)), np.ones((5, 5))))
