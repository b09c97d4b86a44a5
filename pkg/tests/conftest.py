import numpy as np

from pytest import fixture

from naidem import catalog
from naidem.polysolve import solve_idempotents


def match_points(found, expected, tol=1e-8):
    """Every expected point has a distinct partner in found within tol."""
    rest = [np.asarray(p, dtype=complex) for p in found]
    if len(rest) != len(expected):
        return False
    for p in expected:
        d = [np.linalg.norm(q - np.asarray(p, dtype=complex)) for q in rest]
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        rest.pop(k)
    return True


def sorted_values(values):
    return sorted((complex(v) for v in values), key=lambda v: (round(v.real, 6), round(v.imag, 6)))


@fixture(scope="session")
def matsuo():
    return solve_idempotents(catalog.matsuo_3c(0.3))


@fixture(scope="session")
def matsuo_half():
    return solve_idempotents(catalog.matsuo_3c(0.5))


@fixture(scope="session")
def constant_2d():
    return solve_idempotents(catalog.constant_spectrum_2d())


@fixture(scope="session")
def constant_3d():
    return solve_idempotents(catalog.constant_spectrum_3d())


@fixture(scope="session")
def u1_3():
    return solve_idempotents(catalog.cubic_u1(3))


@fixture(scope="session")
def u1_4():
    return solve_idempotents(catalog.cubic_u1(4))


@fixture(scope="session")
def u2():
    return solve_idempotents(catalog.cubic_u2())


@fixture
def rng():
    return np.random.default_rng(2024)
