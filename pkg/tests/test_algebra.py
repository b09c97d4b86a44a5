import json

import numpy as np

from pytest import mark, raises
from hypothesis import given, settings
from hypothesis.strategies import integers

from naidem import catalog
from naidem.algebra import (Algebra, CharPoly, basis, char_poly, conjugate_idempotent, direct_sum,
                            faddeev_leverrier, find_unit, is_idempotent, left_mult_matrix, multiply, square)
from naidem.errors import (CommutativityError, DimensionMismatchError, InputFormatError, NotIdempotentError,
                           NotUnitalError)


def _random_vectors(seed, n, k):
    rng = np.random.default_rng(seed)
    return catalog.random_algebra(n, rng), [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(k)]


def test_asymmetric_tensor_is_rejected():
    t = np.zeros((2, 2, 2))
    t[0, 1, 0] = 1
    with raises(CommutativityError):
        Algebra(t)


@mark.parametrize("shape", ((2, 2), (2, 3, 2), (0, 0, 0)))
def test_bad_shape_is_rejected(shape):
    with raises(DimensionMismatchError):
        Algebra(np.zeros(shape))


def test_non_finite_constants_are_rejected():
    t = np.zeros((1, 1, 1))
    t[0, 0, 0] = np.nan
    with raises(InputFormatError):
        Algebra(t)


def test_tensor_is_read_only():
    A = catalog.matsuo_3c(0.3)
    with raises(ValueError):
        A.tensor[0, 0, 0] = 5


@settings(max_examples=25, deadline=None)
@given(integers(0, 2 ** 32 - 1))
def test_multiply_is_bilinear_and_commutative(seed):
    A, (x, y, z) = _random_vectors(seed, 3, 3)
    a = 0.7 - 1.3j
    assert np.allclose(multiply(A, a * x + y, z), a * multiply(A, x, z) + multiply(A, y, z))
    assert np.allclose(multiply(A, x, y), multiply(A, y, x))


@settings(max_examples=25, deadline=None)
@given(integers(0, 2 ** 32 - 1))
def test_left_multiplication_matrix(seed):
    A, (x, y) = _random_vectors(seed, 4, 2)
    assert np.allclose(left_mult_matrix(A, x) @ y, multiply(A, x, y))


@settings(max_examples=25, deadline=None)
@given(integers(0, 2 ** 32 - 1))
def test_faddeev_leverrier_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.allclose(faddeev_leverrier(M)[::-1], np.poly(M), atol=1e-8)


def test_char_poly_of_zero_is_monomial():
    A = catalog.matsuo_3c(0.3)
    p = char_poly(A, np.zeros(3))
    assert np.allclose(p.coeffs, [0, 0, 0, 1])
    assert p.degree == 3


def test_char_poly_of_matsuo_axis():
    # sigma(e_1) = {0, alpha, 1}
    p = char_poly(catalog.matsuo_3c(0.3), [1, 0, 0])
    assert np.allclose(p.coeffs, np.polynomial.polynomial.polyfromroots([0, 0.3, 1]))


def test_deflate_reports_quotient_and_remainder():
    p = CharPoly(np.array([2.0, -3.0, 1.0]))  # (t - 1)(t - 2)
    quo, rem = p.deflate(1.0)
    assert np.allclose(quo, [-2, 1])
    assert rem < 1e-15
    _, rem = p.deflate(3.0)
    assert rem == 2.0


def test_find_unit_of_matsuo():
    e = find_unit(catalog.matsuo_3c(0.3))
    assert np.allclose(e, np.ones(3) / 1.3, atol=1e-12, rtol=0)


def test_random_algebra_has_no_unit(rng):
    assert find_unit(catalog.random_algebra(3, rng)) is None


def test_conjugate_idempotent():
    A = catalog.matsuo_3c(0.3)
    e = find_unit(A)
    cbar = conjugate_idempotent(A, e, basis(A, 0))
    assert is_idempotent(A, cbar)
    assert np.allclose(multiply(A, basis(A, 0), cbar), 0)


def test_conjugate_idempotent_errors():
    A = catalog.matsuo_3c(0.3)
    e = find_unit(A)
    with raises(NotUnitalError):
        conjugate_idempotent(A, basis(A, 0), basis(A, 1))
    with raises(NotIdempotentError):
        conjugate_idempotent(A, e, 2 * basis(A, 0))


@settings(max_examples=25, deadline=None)
@given(integers(0, 2 ** 32 - 1))
def test_char_poly_vanishes_at_eigenvalues(seed):
    A, (x,) = _random_vectors(seed, 4, 1)
    p = char_poly(A, x)
    for lam in np.linalg.eigvals(left_mult_matrix(A, x)):
        assert abs(p(lam)) < 1e-8 * (1 + abs(lam)) ** 4


@mark.parametrize("i", range(3))
def test_conjugation_is_an_involution(i):
    A = catalog.matsuo_3c(0.3)
    e = find_unit(A)
    c = basis(A, i)
    back = conjugate_idempotent(A, e, conjugate_idempotent(A, e, c))
    assert np.allclose(back, c, atol=1e-12, rtol=0)


@mark.parametrize("i", range(3))
def test_conjugate_char_poly_is_reflected(i):
    # p_{e-c}(t) = (-1)^n p_c(1 - t)
    A = catalog.matsuo_3c(0.3)
    e = find_unit(A)
    c = basis(A, i)
    p, q = char_poly(A, c), char_poly(A, conjugate_idempotent(A, e, c))
    for t in (0.0, 0.5, 2.0, 0.3 + 1.1j):
        assert abs(q(t) - (-1) ** A.dim * p(1 - t)) < 1e-8


def test_direct_sum_of_coordinate_algebras():
    A = direct_sum(catalog.cubic_u1(1), catalog.cubic_u1(2))
    assert np.array_equal(A.tensor, catalog.cubic_u1(3).tensor)
    assert is_idempotent(A, [1, 0, 1])


def test_square_of_constant_spectrum_2d_idempotent():
    A = catalog.constant_spectrum_2d()
    x = np.array([-0.5, 3 ** 0.5 / 2])
    assert np.allclose(square(A, x), x)


def test_json_round_trip(tmp_path):
    A = catalog.cubic_u2()
    path = tmp_path / "u2.json"
    path.write_text(json.dumps(A.to_dict()))
    B = Algebra.load(path)
    assert np.array_equal(A.tensor, B.tensor)
    assert B.label == "u2"


@mark.parametrize("data", ({"tensor": []}, {"dim": 2, "tensor": [[0, 0, 5, 1, 0]]}, {"dim": 2, "tensor": [[0, 0]]}))
def test_malformed_json(data):
    with raises(InputFormatError):
        Algebra.from_dict(data)


def test_load_missing_file(tmp_path):
    with raises(InputFormatError):
        Algebra.load(tmp_path / "nope.json")
