import copy
from dataclasses import replace

import numpy as np

from pytest import mark, raises
from hypothesis import given, settings
from hypothesis.strategies import complex_numbers, floats

from naidem import catalog
from naidem.algebra import find_unit
from naidem.errors import DegreeTooHighError, NotGenericError, UnpairedIdempotentError
from naidem.polysolve import SolveConfig, solve_idempotents
from naidem.spectral import classify_genericity, nonzero_records
from naidem.syzygy import (conjugate_pairs, derivative_syzygies, general_syzygy, half_factorization,
                           idemm_syzygies, principal_syzygy, principal_syzygy_coefficients, syzygy_report,
                           two_dim_syzygy, two_dim_syzygy_reciprocal, unital_syzygies, vector_syzygy)

TOL = 1e-6
bounded = complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def _all_residuals(S):
    report = syzygy_report(S)
    return [report.principal_max_residual, report.vector_residual, report.idemm_max_residual,
            report.idemm1_max_residual, *report.derivative_residuals]


@mark.parametrize("name", ("matsuo", "constant_2d", "constant_3d", "u1_3"))
def test_principal_syzygy_on_catalog(name, request):
    S = request.getfixturevalue(name)
    assert principal_syzygy(S) < 1e-8
    assert max(derivative_syzygies(S)) < 1e-8
    assert vector_syzygy(S) < 1e-8
    assert max(idemm_syzygies(S)) < 1e-8


def test_principal_syzygy_at_half_is_tautological(matsuo):
    assert principal_syzygy(matsuo, [0.5]) < 1e-12


def test_idemm_at_one(matsuo):
    first, _ = idemm_syzygies(matsuo, [1.0])
    assert first < 1e-12


def test_coefficient_form_vanishes(matsuo):
    assert np.max(np.abs(principal_syzygy_coefficients(matsuo))) < 1e-8


def test_vector_syzygy_of_constant_3d(constant_3d):
    assert vector_syzygy(constant_3d) < 1e-8
    total = sum(r.point for r in nonzero_records(constant_3d))
    assert np.linalg.norm(total) < 1e-8


def test_vector_syzygy_of_u1_2():
    assert vector_syzygy(solve_idempotents(catalog.cubic_u1(2))) < 1e-10


def test_general_syzygy_constant_map(matsuo):
    H = [[(1.0, (0, 0, 0))]]
    assert general_syzygy(matsuo, H) < 1e-8


def test_general_syzygy_identity_map(matsuo):
    H = [[(1.0, tuple(int(i == k) for i in range(3)))] for k in range(3)]
    assert abs(general_syzygy(matsuo, H) - vector_syzygy(matsuo)) < 1e-12


def test_general_syzygy_random_quadratic(matsuo, rng):
    H = [[(complex(rng.normal(), rng.normal()), e) for e in ((2, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 1))]
         for _ in range(2)]
    assert general_syzygy(matsuo, H) < 1e-7


def test_general_syzygy_degree_bound(matsuo):
    with raises(DegreeTooHighError):
        general_syzygy(matsuo, [[(1.0, (3, 0, 0))]])


def test_syzygies_refuse_nongeneric(u2):
    with raises(NotGenericError):
        principal_syzygy(u2)


def test_residuals_do_not_depend_on_order(matsuo):
    shuffled = copy.copy(matsuo)
    shuffled.idempotents = list(reversed(matsuo.idempotents))
    assert abs(principal_syzygy(shuffled) - principal_syzygy(matsuo)) < 1e-12
    assert abs(vector_syzygy(shuffled) - vector_syzygy(matsuo)) < 1e-12


def test_unital_u1_4(u1_4):
    e = find_unit(u1_4.algebra)
    assert len(conjugate_pairs(u1_4, e)) == 7
    p1, half41 = unital_syzygies(u1_4, e)
    assert p1 < TOL
    assert half41 < 1e-9


def test_conjugate_pairs_use_the_set_dedup_tol(matsuo):
    e = find_unit(matsuo.algebra)
    k = next(i for i, r in enumerate(matsuo.idempotents) if not r.is_zero and np.linalg.norm(r.point - e) > 1e-3)
    moved = copy.copy(matsuo)
    moved.idempotents = list(matsuo.idempotents)
    moved.idempotents[k] = replace(matsuo.idempotents[k], point=matsuo.idempotents[k].point + 1e-7)
    assert len(conjugate_pairs(moved, e)) == 3
    with raises(UnpairedIdempotentError):
        conjugate_pairs(moved, e, tol=1e-9)
    moved.dedup_tol = 1e-9
    with raises(UnpairedIdempotentError):
        conjugate_pairs(moved, e)


def test_solve_config_dedup_tol_reaches_the_set():
    S = solve_idempotents(catalog.matsuo_3c(0.3), SolveConfig(dedup_tol=1e-9))
    assert S.dedup_tol == 1e-9
    assert len(conjugate_pairs(S, find_unit(S.algebra))) == 3


def test_unital_u1_3(u1_3):
    p1, half41 = unital_syzygies(u1_3, find_unit(u1_3.algebra))
    assert p1 < TOL
    assert half41 is None


def test_unital_matsuo(matsuo):
    p1, _ = unital_syzygies(matsuo, find_unit(matsuo.algebra))
    assert p1 < TOL


def test_report_with_unit(u1_4):
    report = syzygy_report(u1_4, find_unit(u1_4.algebra))
    assert report.unital["half41_residual"] < 1e-9
    assert report.max_residual < TOL
    assert len(report.samples) == 24


@mark.parametrize("lams", ((1, 0, 0), (-1, -1, -1), (0.5, 0.5, 7.3)))
def test_two_dim_syzygy_examples(lams):
    assert abs(two_dim_syzygy(*lams)) < 1e-12


def test_reciprocal_form_flags_pole():
    value, pole = two_dim_syzygy_reciprocal(0.5, 0, 0)
    assert pole and np.isinf(abs(value))
    value, pole = two_dim_syzygy_reciprocal(-1, -1, -1)
    assert not pole and abs(value) < 1e-12


@settings(max_examples=100)
@given(bounded, bounded)
def test_half_factorization(l1, l2):
    assert abs(two_dim_syzygy(l1, l2, 0.5) - half_factorization(l1, l2)) <= 1e-9 * (1 + abs(l1 * l2))


@settings(max_examples=50)
@given(floats(-5, 5), floats(-5, 5))
def test_reciprocal_and_product_forms_agree(l1, l2):
    # l3 from the product form; the reciprocal form then vanishes too
    if abs(4 * l1 * l2 - 1) < 1e-3 or abs(2 * l1 - 1) < 1e-3 or abs(2 * l2 - 1) < 1e-3:
        return
    l3 = (l1 + l2 - 1) / (4 * l1 * l2 - 1)
    if abs(2 * l3 - 1) < 1e-3:
        return
    value, pole = two_dim_syzygy_reciprocal(l1, l2, l3)
    assert not pole
    assert abs(value) < 1e-6 * (1 + abs(1 / (1 - 2 * l3)))


def _two_dim_lambdas(S):
    lams = []
    for r in nonzero_records(S):
        rest = list(r.spectrum.multiset())
        rest.pop(int(np.argmin([abs(v - 1) for v in rest])))
        lams.append(rest[0])
    return lams


def _check_random(n, rng):
    S = solve_idempotents(catalog.random_algebra(n, rng))
    if not classify_genericity(S.algebra, S).generic:
        return None
    if n == 2:
        assert abs(two_dim_syzygy(*_two_dim_lambdas(S))) < 1e-9
    return max(_all_residuals(S))


@mark.parametrize("n", (2, 3))
def test_random_generic_algebras(n):
    rng = np.random.default_rng(100 + n)
    results = [_check_random(n, rng) for _ in range(5)]
    assert all(r < TOL for r in results if r is not None)


@mark.slow
@mark.parametrize("n", (2, 3, 4))
def test_random_generic_algebras_many(n):
    rng = np.random.default_rng(1000 + n)
    results = [_check_random(n, rng) for _ in range(100)]
    checked = [r for r in results if r is not None]
    assert len(checked) >= 90
    assert all(r < TOL for r in checked)


@mark.slow
def test_random_unital_algebras():
    rng = np.random.default_rng(77)
    checked = 0
    for _ in range(20):
        S = solve_idempotents(catalog.random_unital_algebra(4, rng))
        if not classify_genericity(S.algebra, S).generic:
            continue
        p1, _ = unital_syzygies(S, find_unit(S.algebra))
        assert p1 < TOL
        checked += 1
    assert checked >= 15
