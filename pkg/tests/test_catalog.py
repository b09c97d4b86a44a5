from collections import Counter

import numpy as np

from pytest import fixture, mark, raises

from conftest import match_points
from naidem import catalog
from naidem.algebra import basis, find_unit, is_idempotent, left_mult_matrix
from naidem.errors import CatalogError
from naidem.polysolve import solve_idempotents
from naidem.spectral import classify_genericity, nonzero_records, same_multiset, spectrum_of


def test_registry():
    assert len(catalog.ENTRIES) >= 8
    for entry in catalog.ENTRIES.values():
        assert all(f.source in ("published", "derived", "trivial") for f in entry.expected.values())
        assert entry.build().dim >= 2


def test_generalized_matsuo_reduces_to_matsuo():
    assert np.array_equal(catalog.generalized_matsuo(0.3, 0).tensor, catalog.matsuo_3c(0.3).tensor)


@mark.parametrize("alpha, eps", ((0.3, 0.2), (-0.4, 0.7), (2.0, 0.1)))
def test_generalized_matsuo_expected_points(alpha, eps):
    A = catalog.generalized_matsuo(alpha, eps)
    expected = catalog.generalized_matsuo_expected(alpha, eps)
    assert expected["generic"]
    assert all(is_idempotent(A, p) for p in expected["points"])


def test_generalized_matsuo_solves_to_eight():
    S = solve_idempotents(catalog.generalized_matsuo(0.3, 0.2))
    assert S.count == 8
    assert match_points(S.points(), catalog.generalized_matsuo_expected(0.3, 0.2)["points"])


def test_matsuo_expected_points_are_idempotent():
    A = catalog.matsuo_3c(0.3)
    assert all(is_idempotent(A, p) for p in catalog.matsuo_expected(0.3)["points"])


def test_constant_spectrum_3d_parameters():
    alpha, beta, gamma = catalog.constant_spectrum_3d_parameters()
    assert abs(alpha + beta + 1) < 1e-12
    A = catalog.constant_spectrum_3d()
    points = catalog.constant_spectrum_3d_idempotents()
    assert len(points) == 7
    assert all(is_idempotent(A, p, 1e-10) for p in points)
    assert np.linalg.norm(sum(points)) < 1e-12


def test_constant_spectrum_2d_points(constant_2d):
    r = 3 ** 0.5 / 2
    assert match_points(constant_2d.points(), [[0, 0], [1, 0], [-0.5, r], [-0.5, -r]])


def test_pair_products():
    A = catalog.two_dim_from_pair(0.2, 0.7)
    # L_{c1} c2 = 0.7 c1 + 0.2 c2
    assert np.allclose(left_mult_matrix(A, [1, 0]) @ [0, 1], [0.7, 0.2], atol=1e-15, rtol=0)


def test_u1_eps_total_spectrum():
    S = solve_idempotents(catalog.build("u1eps"))
    expected = catalog.ENTRIES["u1eps"].expected["total_spectrum"].value
    counts = Counter()
    for v in (v for r in S.idempotents for v in r.spectrum.multiset()):
        key = min(expected, key=lambda k: abs(v - k))
        assert abs(v - key) < 1e-7
        counts[key] += 1
    assert counts == expected


@mark.parametrize("k", (0, 0.5 ** 0.5))
def test_bad_circle_radius(k):
    with raises(CatalogError):
        catalog.cubic_circle_form(k)


def test_build_errors():
    with raises(CatalogError):
        catalog.build("octonions")
    with raises(CatalogError):
        catalog.build("matsuo", beta=1)
    with raises(CatalogError):
        catalog.build_cubic("matsuo")


def test_build_with_parameters():
    A = catalog.build("u1", n=4)
    assert A.dim == 4
    assert catalog.build_cubic("circle", k=0.3).label == "circle(0.3)"


@mark.parametrize("n", (2, 3, 4))
def test_random_unital_algebra_has_unit(n, rng):
    A = catalog.random_unital_algebra(n, rng)
    e = find_unit(A)
    assert e is not None
    assert np.allclose(left_mult_matrix(A, e), np.eye(n), atol=1e-8, rtol=0)


@fixture(scope="module")
def solved():
    return {name: solve_idempotents(entry.build()) for name, entry in catalog.ENTRIES.items()}


@mark.parametrize("name", sorted(catalog.ENTRIES))
def test_entry_matches_solver(name, solved):
    S = solved[name]
    expected = {key: f.value for key, f in catalog.ENTRIES[name].expected.items()}
    if "idempotent_count" in expected:
        assert S.count == expected["idempotent_count"]
    if "nilpotent_count" in expected:
        assert len(S.nilpotent_directions) == expected["nilpotent_count"]
    if "genericity" in expected:
        assert classify_genericity(S.algebra, S).kind == expected["genericity"]
    if "spectrum" in expected:
        for r in nonzero_records(S):
            assert same_multiset(r.spectrum.multiset(), expected["spectrum"], 1e-8)
    if "basis_spectrum" in expected:
        for i in range(S.algebra.dim):
            assert same_multiset(spectrum_of(S.algebra, basis(S.algebra, i)).multiset(), expected["basis_spectrum"], 1e-10)


@mark.parametrize("alpha, eps", ((0.3, 0.2), (-0.4, 0.7), (2.0, 0.1)))
def test_generalized_matsuo_spectra(alpha, eps):
    S = solve_idempotents(catalog.generalized_matsuo(alpha, eps))
    expected = catalog.generalized_matsuo_expected(alpha, eps)
    assert S.count == len(expected["points"]) == 8
    for p, spectrum in zip(expected["points"], expected["spectra"]):
        r = min(S.idempotents, key=lambda r: np.linalg.norm(r.point - p))
        assert np.linalg.norm(r.point - p) < 1e-8
        assert same_multiset(r.spectrum.multiset(), spectrum, 1e-8)


def test_generalized_matsuo_conjugate_spectrum():
    spectrum = catalog.generalized_matsuo_expected(0.3, 0.2)["spectra"][-1]
    assert np.allclose(sorted(np.real(spectrum)), [0.147059, 0.764706, 1], atol=1e-6, rtol=0)
