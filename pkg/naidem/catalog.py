"""
catalog.py
• Constructors for the named example algebras: Matsuo 3C_a and its two-parameter version,
  two-dimensional algebras on a pair of idempotents, the constant-spectrum algebras in
  dimensions two and three, and the algebras of the cubic forms u1, u1 + eps, u2 and the circle form.
• ENTRIES: name -> builder, parameters with defaults and expected fixtures tagged with their source.
• Random algebras for property tests.
"""

from __future__ import annotations

import cmath
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import Algebra, direct_sum, is_idempotent
from .errors import CatalogError
from .metrised import CubicForm, algebra_from_cubic

log = logging.getLogger(__name__)


def _tensor(n: int) -> np.ndarray:
    return np.zeros((n, n, n), dtype=complex)


def _set_product(t: np.ndarray, i: int, j: int, value) -> None:
    t[i, j] = value
    t[j, i] = value


def _cubic(n: int, entries: dict[tuple[int, int, int], complex], label: str) -> CubicForm:
    t = _tensor(n)
    for key, v in entries.items():
        for p in set(itertools.permutations(key)):
            t[p] = v
    return CubicForm(t, label)


# -------- Matsuo ----------
def generalized_matsuo(alpha: complex, eps: complex) -> Algebra:
    """e_i^2 = e_i, e_i e_j = (alpha/2)(e_i + e_j) + ((eps - alpha)/2) e_k."""
    t = _tensor(3)
    for i in range(3):
        t[i, i, i] = 1
    for i, j in itertools.combinations(range(3), 2):
        k = 3 - i - j
        v = np.zeros(3, dtype=complex)
        v[i] = v[j] = alpha / 2
        v[k] = (eps - alpha) / 2
        _set_product(t, i, j, v)
    return Algebra(t, f"3C({alpha},{eps})")


def matsuo_3c(alpha: complex) -> Algebra:
    A = generalized_matsuo(alpha, 0)
    return Algebra(A.tensor, f"3C({alpha})")


def matsuo_expected(alpha: complex) -> dict:
    """Idempotents and spectra of 3C_a for a not in {-1, 1/2}."""
    e = np.eye(3, dtype=complex)
    unit = np.ones(3, dtype=complex) / (alpha + 1)
    points = [np.zeros(3, dtype=complex)] + [e[i] for i in range(3)] + [unit - e[i] for i in range(3)] + [unit]
    spectra = [[0, 0, 0]] + [[0, alpha, 1]] * 3 + [[0, 1 - alpha, 1]] * 3 + [[1, 1, 1]]
    return {"points": points, "spectra": spectra}


def generalized_matsuo_expected(alpha: complex, eps: complex) -> dict:
    """Idempotents 0, e7, e_i, e_{3+i} of 3C(alpha, eps) and their spectra, aligned; e_{3+i} needs gamma != 0."""
    s = np.ones(3, dtype=complex)
    e = np.eye(3, dtype=complex)
    g = alpha + 1 + eps * (eps - 2 * alpha - 1)
    mu = 1 - 3 * eps / (2 * (1 + alpha + eps))
    points = [np.zeros(3, dtype=complex), s / (1 + alpha + eps)]
    points += [e[i] for i in range(3)]
    spectra = [[0, 0, 0], [1, mu, mu]] + [[1, alpha - eps / 2, eps / 2]] * 3
    generic = (alpha + 1 + eps) * (eps - 1) * g != 0
    if g == 0:
        return {"points": points, "spectra": spectra, "generic": generic}
    points += [(1 - eps) / g * s - (alpha + 1 - 2 * eps) / g * e[i] for i in range(3)]
    conj = [1, eps * (2 - alpha - eps) / (2 * g), (2 * (1 - alpha ** 2) + eps * (3 * alpha - eps - 2)) / (2 * g)]
    spectra += [conj] * 3
    return {"points": points, "spectra": spectra, "generic": generic}


# -------- dimension two ----------
def two_dim_from_pair(l1: complex, l2: complex) -> Algebra:
    """Idempotent basis c1, c2 with c1 c2 = l2 c1 + l1 c2 (so L_{c1} c2 has the l1 coefficient on c2)."""
    t = _tensor(2)
    t[0, 0, 0] = 1
    t[1, 1, 1] = 1
    _set_product(t, 0, 1, [l2, l1])
    return Algebra(t, f"pair({l1},{l2})")


def constant_spectrum_2d() -> Algebra:
    """e1^2 = e1, e2^2 = -e1, e1 e2 = -e2."""
    t = _tensor(2)
    t[0, 0, 0] = 1
    t[1, 1, 0] = -1
    _set_product(t, 0, 1, [0, -1])
    return Algebra(t, "constant-2d")


def _constant_3d_tensor(alpha, beta, gamma) -> np.ndarray:
    # c_i c_j = alpha c_i + beta c_j + gamma c_k for (i, j) in cyclic order
    t = _tensor(3)
    for i in range(3):
        t[i, i, i] = 1
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        v = np.zeros(3, dtype=complex)
        v[i], v[j], v[k] = alpha, beta, gamma
        _set_product(t, i, j, v)
    return t


def constant_spectrum_3d_parameters() -> tuple[complex, complex, complex]:
    gamma = (1 - cmath.sqrt(-7)) / 4
    r = cmath.sqrt(-6 + 2 * cmath.sqrt(-7)) / 4
    for alpha, beta in ((-0.5 + r, -0.5 - r), (-0.5 - r, -0.5 + r)):
        t = _constant_3d_tensor(alpha, beta, gamma)
        A = Algebra(t)
        if all(is_idempotent(A, c, 1e-10) for c in _constant_3d_extra(gamma)):
            return alpha, beta, gamma
    raise CatalogError("neither sign choice of alpha, beta reproduces the extra idempotents")


def _constant_3d_extra(gamma) -> list[np.ndarray]:
    """The four idempotents besides the basis; with it they sum to zero."""
    g = gamma
    return [np.array(v, dtype=complex) for v in (
        [-g, -g, -g],
        [g - 1, -g, g],
        [g, g - 1, -g],
        [-g, g, g - 1],
    )]


def constant_spectrum_3d() -> Algebra:
    alpha, beta, gamma = constant_spectrum_3d_parameters()
    return Algebra(_constant_3d_tensor(alpha, beta, gamma), "constant-3d")


def constant_spectrum_3d_idempotents() -> list[np.ndarray]:
    alpha, beta, gamma = constant_spectrum_3d_parameters()
    return [np.eye(3, dtype=complex)[i] for i in range(3)] + _constant_3d_extra(gamma)


# -------- cubic forms ----------
def cubic_u1_form(n: int) -> CubicForm:
    if n < 1:
        raise CatalogError(f"u1 needs n >= 1, got {n}")
    return _cubic(n, {(i, i, i): 1 for i in range(n)}, f"u1({n})")


def cubic_u1(n: int) -> Algebra:
    return algebra_from_cubic(cubic_u1_form(n))


def cubic_u1_eps_form(eps: complex) -> CubicForm:
    """u1(3) + eps x1 x2 x3."""
    entries = {(i, i, i): 1 for i in range(3)}
    entries[(0, 1, 2)] = eps
    return _cubic(3, entries, f"u1eps({eps})")


def cubic_u1_eps(eps: complex) -> Algebra:
    return algebra_from_cubic(cubic_u1_eps_form(eps))


def cubic_u2_form() -> CubicForm:
    """(1/2) x1 (x3^2 - x4^2) + i x2 x3 x4."""
    return _cubic(4, {(0, 2, 2): 1, (0, 3, 3): -1, (1, 2, 3): 1j}, "u2")


def cubic_u2() -> Algebra:
    return algebra_from_cubic(cubic_u2_form())


def cubic_circle_form(k: float) -> CubicForm:
    """x3 (x1^2 + x2^2)/2 - (4k^2 - 2) x3^3 / 6: idempotents on the circle x1^2 + x2^2 = k^2, x3 = 1/2."""
    if k == 0 or abs(4 * k * k - 2) < 1e-12:
        raise CatalogError(f"circle form needs k != 0 and 4k^2 != 2, got k = {k}")
    return _cubic(3, {(0, 0, 2): 1, (1, 1, 2): 1, (2, 2, 2): -(4 * k * k - 2)}, f"circle({k})")


def cubic_circle(k: float) -> Algebra:
    return algebra_from_cubic(cubic_circle_form(k))


# -------- registry ----------
@dataclass(frozen=True)
class Fixture:
    value: object
    source: str  # published | derived | trivial


@dataclass
class CatalogEntry:
    name: str
    builder: Callable[..., Algebra]
    params: dict[str, complex] = field(default_factory=dict)
    expected: dict[str, Fixture] = field(default_factory=dict)
    cubic: Callable[..., CubicForm] | None = None

    def build(self, **params) -> Algebra:
        unknown = set(params) - set(self.params)
        if unknown:
            raise CatalogError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        return self.builder(**{**self.params, **params})

    def build_cubic(self, **params) -> CubicForm:
        if self.cubic is None:
            raise CatalogError(f"{self.name} is not defined by a cubic form")
        unknown = set(params) - set(self.params)
        if unknown:
            raise CatalogError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        return self.cubic(**{**self.params, **params})


ROOT7 = 7 ** 0.5
CUBE_ROOTS = [1, complex(-0.5, 3 ** 0.5 / 2), complex(-0.5, -(3 ** 0.5) / 2)]

ENTRIES: dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry("matsuo", lambda alpha: matsuo_3c(alpha), {"alpha": 0.3}, {
        "idempotent_count": Fixture(8, "published"),
        "nilpotent_count": Fixture(0, "published"),
        "genericity": Fixture("generic", "published"),
    }),
    CatalogEntry("gen-matsuo", lambda alpha, eps: generalized_matsuo(alpha, eps), {"alpha": 0.3, "eps": 0.2}, {
        "idempotent_count": Fixture(8, "published"),
        "basis_spectrum": Fixture([1, 0.2, 0.1], "published"),
        "genericity": Fixture("generic", "published"),
    }),
    CatalogEntry("pair", lambda l1, l2: two_dim_from_pair(l1, l2), {"l1": -1, "l2": -1}, {
        "idempotent_count": Fixture(4, "derived"),
    }),
    CatalogEntry("constant-2d", lambda: constant_spectrum_2d(), {}, {
        "idempotent_count": Fixture(4, "published"),
        "spectrum": Fixture([1, -1], "published"),
        "genericity": Fixture("generic", "published"),
    }),
    CatalogEntry("constant-3d", lambda: constant_spectrum_3d(), {}, {
        "idempotent_count": Fixture(8, "published"),
        "spectrum": Fixture(CUBE_ROOTS, "published"),
        "genericity": Fixture("generic", "published"),
    }),
    CatalogEntry("u1", lambda n: cubic_u1(int(np.real(n))), {"n": 3}, {
        "idempotent_count": Fixture(8, "published"),
    }, cubic=lambda n: cubic_u1_form(int(np.real(n)))),
    CatalogEntry("u1eps", lambda eps: cubic_u1_eps(eps), {"eps": 1}, {
        "total_spectrum": Fixture({0: 8, -1: 6, 1: 10}, "published"),
    }, cubic=lambda eps: cubic_u1_eps_form(eps)),
    CatalogEntry("u2", lambda: cubic_u2(), {}, {
        "idempotent_count": Fixture(9, "derived"),  # zero and the eight roots of w^8 = 1/16, w = x3 + i x4
        "nilpotent_count": Fixture(1, "published"),
        "spectrum": Fixture([-0.25 - ROOT7 / 4, -0.5, -0.25 + ROOT7 / 4, 1], "published"),
        "genericity": Fixture("nongeneric_nilpotent", "published"),
    }, cubic=lambda: cubic_u2_form()),
    CatalogEntry("circle", lambda k: cubic_circle(float(np.real(k))), {"k": 0.5}, {
        "genericity": Fixture("nongeneric_infinite_family", "published"),
    }, cubic=lambda k: cubic_circle_form(float(np.real(k)))),
]}


def build(name: str, **params) -> Algebra:
    try:
        entry = ENTRIES[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(ENTRIES)}")
    A = entry.build(**params)
    log.debug(f"built {A.label} from catalog entry {name}")
    return A


def build_cubic(name: str, **params) -> CubicForm:
    try:
        entry = ENTRIES[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(ENTRIES)}")
    return entry.build_cubic(**params)


def random_algebra(n: int, rng: np.random.Generator) -> Algebra:
    """Symmetrized i.i.d. complex Gaussian structure constants."""
    t = rng.normal(size=(n, n, n)) + 1j * rng.normal(size=(n, n, n))
    return Algebra((t + t.transpose(1, 0, 2)) / 2, f"random({n})")


def _random_unital_block(m: int, rng: np.random.Generator) -> Algebra:
    """e_0 is the unit; the products of the other basis vectors are random."""
    t = _tensor(m)
    for j in range(m):
        _set_product(t, 0, j, np.eye(m)[j])
    if m > 1:
        r = rng.normal(size=(m - 1, m - 1, m)) + 1j * rng.normal(size=(m - 1, m - 1, m))
        t[1:, 1:] = (r + r.transpose(1, 0, 2)) / 2
    return Algebra(t)


def random_unital_algebra(n: int, rng: np.random.Generator) -> Algebra:
    """Random unital block of dimension n - 1 plus a copy of the field, in a random basis."""
    A = _random_unital_block(n, rng) if n == 1 else direct_sum(_random_unital_block(n - 1, rng), _random_unital_block(1, rng))
    P = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    # structure constants in the basis f_a = sum_i P[i, a] e_i
    t = np.einsum("ia,jb,ijk,ck->abc", P, P, A.tensor, np.linalg.inv(P))
    return Algebra(t, f"random-unital({n})")
