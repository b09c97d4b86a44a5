"""
metrised.py
• Cubic forms u(x) = (1/6) sum u3[i][j][k] x_i x_j x_k and the algebra they define through a
  nonsingular symmetric form: <xy, z> = u(x, y, z).
• Associativity of the form (<xy, z> = <x, yz>), self-adjointness of L_x.
• Extremal idempotent of a Euclidean metrised algebra: maximize <x^2, x>/|x|^3 on the sphere
  and rescale the maximizer y to c = y / <y^2, y>.
• Fusion of the 1/2-eigenspace: A_c(1/2) A_c(1/2) is orthogonal to A_c(1/2).
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg
from scipy.optimize import OptimizeResult

from . import config
from .algebra import Algebra, Element, left_mult_matrix, multiply
from .errors import (AllStartsNegativeError, DimensionMismatchError, FormNotAssociativeError,
                     HalfNotInSpectrumError, InputFormatError, NotEuclideanError, SingularFormError,
                     ZeroFormError)
from .spectral import IdempotentRecord, make_record, peirce_space

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
ASSOCIATIVITY_TOL = 1e-10
MAX_ITER = 200
ARMIJO = 1e-4


@dataclass(frozen=True, eq=False)
class CubicForm:
    tri: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.array(self.tri, dtype=complex)
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]):
            raise DimensionMismatchError(f"cubic form tensor must be n x n x n, got {t.shape}")
        perms = [t.transpose(p) for p in itertools.permutations(range(3))]
        asym = max(float(np.max(np.abs(t - q))) for q in perms)
        if asym > SYMMETRY_TOL:
            raise InputFormatError(f"cubic form is not fully symmetric (max asymmetry {asym:.3e})")
        t = sum(perms) / 6
        t.setflags(write=False)
        object.__setattr__(self, "tri", t)

    @property
    def dim(self) -> int:
        return self.tri.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.tri.imag), initial=0.0) < SYMMETRY_TOL)

    def __call__(self, x) -> complex:
        return cubic_value(self, x)

    def to_dict(self) -> dict:
        entries = []
        for i, j, k in itertools.combinations_with_replacement(range(self.dim), 3):
            v = self.tri[i, j, k]
            if v != 0:
                entries.append([i, j, k, float(v.real), float(v.imag)])
        return {"dim": self.dim, "tri": entries, "label": self.label}

    @classmethod
    def from_dict(cls, data: dict) -> "CubicForm":
        """Each listed entry fills all its index permutations; conflicting duplicates are rejected."""
        try:
            n = int(data["dim"])
            values: dict[tuple, complex] = {}
            for i, j, k, re, im in data.get("tri", []):
                key = tuple(sorted((int(i), int(j), int(k))))
                v = complex(float(re), float(im))
                if key in values and abs(values[key] - v) > SYMMETRY_TOL:
                    raise InputFormatError(f"entries for {key} disagree: {values[key]} vs {v}")
                values[key] = v
            t = np.zeros((n, n, n), dtype=complex)
            for key, v in values.items():
                for p in set(itertools.permutations(key)):
                    t[p] = v
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise InputFormatError(f"malformed cubic form JSON: {e}")
        return cls(t, str(data.get("label", "")))

    @classmethod
    def load(cls, path: str | Path) -> "CubicForm":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise InputFormatError(f"cannot read cubic form from {path}: {e}")


@dataclass(frozen=True, eq=False)
class InnerProduct:
    matrix: np.ndarray

    def __post_init__(self):
        B = np.array(self.matrix, dtype=complex)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionMismatchError(f"inner product must be a square matrix, got {B.shape}")
        if np.max(np.abs(B - B.T)) > SYMMETRY_TOL:
            raise SingularFormError("inner product matrix is not symmetric")
        if abs(np.linalg.det(B)) <= 1e-12:
            raise SingularFormError("inner product matrix is singular")
        B.setflags(write=False)
        object.__setattr__(self, "matrix", B)

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls(np.eye(n))

    @classmethod
    def from_dict(cls, data) -> "InnerProduct":
        """{"matrix": rows} or the bare rows; entries are numbers or [re, im] pairs."""
        rows = data.get("matrix") if isinstance(data, dict) else data
        try:
            M = np.array([[complex(*v) if isinstance(v, list) else complex(v) for v in row] for row in rows])
        except (TypeError, ValueError) as e:
            raise InputFormatError(f"malformed inner product JSON: {e}")
        return cls(M)

    @classmethod
    def load(cls, path: str | Path) -> "InnerProduct":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise InputFormatError(f"cannot read inner product from {path}: {e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def euclidean(self) -> bool:
        return bool(np.max(np.abs(self.matrix - np.eye(self.dim))) < SYMMETRY_TOL)

    def __call__(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.matrix @ np.asarray(y))


def _check_dims(n: int, B: InnerProduct):
    if B.dim != n:
        raise DimensionMismatchError(f"inner product of size {B.dim} for dimension {n}")


def algebra_from_cubic(u: CubicForm, B: InnerProduct | None = None) -> Algebra:
    B = B or InnerProduct.identity(u.dim)
    _check_dims(u.dim, B)
    Binv = np.linalg.inv(B.matrix)
    return Algebra(np.einsum("ijl,lk->ijk", u.tri, Binv), u.label)


def _form_tensor(A: Algebra, B: InnerProduct) -> np.ndarray:
    # M[i, j, k] = <e_i e_j, e_k>
    return np.einsum("ijl,lk->ijk", A.tensor, B.matrix)


def metrised_check(A: Algebra, B: InnerProduct | None = None) -> tuple[bool, float]:
    B = B or InnerProduct.identity(A.dim)
    _check_dims(A.dim, B)
    M = _form_tensor(A, B)
    # <e_i, e_j e_k> = M[j, k, i]
    violation = float(np.max(np.abs(M - M.transpose(2, 0, 1))))
    return violation < ASSOCIATIVITY_TOL, violation


def cubic_from_algebra(A: Algebra, B: InnerProduct | None = None) -> CubicForm:
    B = B or InnerProduct.identity(A.dim)
    ok, violation = metrised_check(A, B)
    if not ok:
        raise FormNotAssociativeError(f"<xy, z> != <x, yz> (max violation {violation:.3e})")
    M = _form_tensor(A, B)
    return CubicForm(sum(M.transpose(p) for p in itertools.permutations(range(3))) / 6, A.label)


def self_adjoint_defect(A: Algebra, B: InnerProduct, x) -> float:
    L = left_mult_matrix(A, x)
    return float(np.linalg.norm(B.matrix @ L - L.T @ B.matrix))


# -------- the cubic and the extremal functional ----------
def cubic_value(u: CubicForm, x) -> complex:
    x = np.asarray(x)
    return complex(np.einsum("i,j,k,ijk->", x, x, x, u.tri) / 6)


def cubic_gradient(u: CubicForm, x) -> np.ndarray:
    """Du(x) = (1/2) u3(x, x, .), which is (1/2) x^2 for the Euclidean algebra of u."""
    x = np.asarray(x)
    return np.einsum("i,j,ijk->k", x, x, u.tri) / 2


def extremal_objective(u: CubicForm, x) -> float:
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x)
    return float(np.real(6 * cubic_value(u, x)) / r ** 3)


def extremal_gradient(u: CubicForm, x) -> np.ndarray:
    """3 (x^2 |x|^2 - <x^2, x> x) / |x|^5."""
    x = np.asarray(x, dtype=float)
    r2 = x @ x
    x2 = np.real(2 * cubic_gradient(u, x))
    N = x2 @ x
    return 3 * (x2 * r2 - N * x) / r2 ** 2.5


def extremal_hessian(u: CubicForm, x) -> np.ndarray:
    """3 [2 r^4 L_x - 3 r^2 (x^2 x^T + x (x^2)^T) - N r^2 I + 5 N x x^T] / r^7."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    r2 = x @ x
    L = np.real(np.einsum("i,ijk->kj", x, u.tri))
    x2 = L @ x
    N = x2 @ x
    H = (2 * r2 ** 2 * L - 3 * r2 * (np.outer(x2, x) + np.outer(x, x2))
         - N * r2 * np.eye(n) + 5 * N * np.outer(x, x))
    return 3 * H / r2 ** 3.5


def _ascend(u: CubicForm, x0: np.ndarray) -> OptimizeResult:
    """Projected gradient ascent on the unit sphere with Armijo backtracking."""
    x = x0 / np.linalg.norm(x0)
    fx = extremal_objective(u, x)
    nit = 0
    for nit in range(1, MAX_ITER + 1):
        g = extremal_gradient(u, x)
        gg = float(g @ g)
        if gg < 1e-24:
            break
        step = 1.0
        while step > 1e-12:
            y = x + step * g
            y /= np.linalg.norm(y)
            fy = extremal_objective(u, y)
            if fy >= fx + ARMIJO * step * gg:
                break
            step /= 2
        else:
            break
        x, fx = y, fy
    return OptimizeResult(x=x, fun=fx, nit=nit, jac=extremal_gradient(u, x),
                          success=bool(np.linalg.norm(extremal_gradient(u, x)) < 1e-8))


@dataclass
class ExtremalIdempotent:
    record: IdempotentRecord
    value: float
    half_bound_holds: bool
    one_is_simple: bool
    critical_values: list[float] = field(default_factory=list)

    @property
    def point(self) -> Element:
        return self.record.point


def _without_one(values: list[complex], tol: float = 1e-6) -> list[complex]:
    rest = list(values)
    k = min(range(len(rest)), key=lambda i: abs(rest[i] - 1))
    if abs(rest[k] - 1) < tol:
        rest.pop(k)
    return rest


def extremal_idempotent(u: CubicForm, starts: int | None = None, seed: int | None = None,
                        B: InnerProduct | None = None) -> ExtremalIdempotent:
    from .polysolve import SolveConfig, newton_refine

    starts = config.EXTREMAL_STARTS if starts is None else starts
    seed = config.SEED if seed is None else seed
    if B is not None and not B.euclidean:
        raise NotEuclideanError("extremal search needs the Euclidean inner product")
    if not u.is_real:
        raise NotEuclideanError("extremal search needs a real cubic form")
    if np.max(np.abs(u.tri)) == 0:
        raise ZeroFormError("u = 0: the algebra is zero and has no nonzero idempotents")

    rng = np.random.default_rng(seed)
    results = []
    for _ in range(starts):
        x = rng.normal(size=u.dim)
        if extremal_objective(u, x) < 0:
            x = -x
        results.append(_ascend(u, x))
    positive = [res for res in results if res.fun > 0]
    if not positive:
        raise AllStartsNegativeError(f"no start of {starts} reached a positive value; retry with more starts")
    best = min(positive, key=lambda res: (-round(res.fun, 10),) + tuple(np.round(res.x, 10)))
    log.debug(f"extremal search: best value {best.fun:.12g} after {best.nit} iterations")

    A = algebra_from_cubic(u)
    y = best.x
    k = float(np.real(multiply(A, y, y) @ y))
    ep = newton_refine(A, y / k, SolveConfig(seed=seed))
    point = ep.point.real.astype(complex) if np.max(np.abs(ep.point.imag)) < 1e-12 else ep.point
    record = make_record(A, point, ep.residual, ep.jacobian_min_singular_value)
    record.extra.update({"extremal": True, "f_value": best.fun})

    spectrum = record.spectrum.multiset()
    rest = _without_one(spectrum)
    half_ok = all(v.real <= 0.5 + 1e-8 for v in rest)
    simple = sum(abs(v - 1) < 1e-6 for v in spectrum) == 1
    if not half_ok:
        log.warning(f"extremal idempotent has an eigenvalue above 1/2: {rest}")
    values = sorted({round(res.fun, 8) for res in results}, reverse=True)
    return ExtremalIdempotent(record, best.fun, half_ok, simple, values)


def fusion_check(A: Algebra, B: InnerProduct | None, c, cluster_tol: float | None = None) -> float:
    """max |<z_a z_b, z_d>| over an orthonormal basis of A_c(1/2)."""
    cluster_tol = config.CLUSTER_TOL if cluster_tol is None else cluster_tol
    B = B or InnerProduct.identity(A.dim)
    ok, violation = metrised_check(A, B)
    if not ok:
        raise FormNotAssociativeError(f"<xy, z> != <x, yz> (max violation {violation:.3e})")
    record = c if isinstance(c, IdempotentRecord) else make_record(A, c, 0.0)
    if not record.spectrum.contains(0.5, cluster_tol):
        raise HalfNotInSpectrumError(f"1/2 is not an eigenvalue (distance {record.half_distance:.3e})")
    Z = peirce_space(A, record.point, 0.5)
    if Z.shape[1] == 0:
        raise HalfNotInSpectrumError("the 1/2-eigenspace is numerically empty")
    Z = scipy.linalg.orth(Z)
    worst = 0.0
    for a in range(Z.shape[1]):
        for b in range(a, Z.shape[1]):
            zz = multiply(A, Z[:, a], Z[:, b])
            for d in range(Z.shape[1]):
                worst = max(worst, abs(B(zz, Z[:, d])))
    return worst
