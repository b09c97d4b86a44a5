"""
spectral.py
• Peirce spectra: roots of the monic characteristic polynomial of L_c by Aberth-Ehrlich
  iteration, clustered into multiplicities.
• Peirce dimensions n_c(lambda) = dim ker(L_c - lambda I) and semisimplicity.
• IdempotentRecord, the genericity verdict, the algebra spectrum and the
  constant/common spectrum checks on a solved idempotent set.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import comb, factorial
from typing import TYPE_CHECKING

import numpy as np
from numpy.polynomial import polynomial as P
import scipy.linalg
import scipy.sparse
from scipy.sparse.csgraph import connected_components

from . import config
from .algebra import Algebra, CharPoly, Element, char_poly, left_mult_matrix
from .errors import NotGenericError, RootIterationStalled, TheoryInconsistencyError

if TYPE_CHECKING:
    from .polysolve import IdempotentSet

log = logging.getLogger(__name__)

# candidate radii for multiple roots, coarse to fine; the last split is at cluster_tol
CLUSTER_RADII = (1e-2, 1e-3, 1e-4, 1e-5)
# rounding allowance on the Taylor coefficients, relative to |p^(j)|(|z|)/j!
TAYLOR_TOL = 1e-13
ZERO_NORM = 1e-8
REAL_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    roots: list[tuple[complex, int]]

    @property
    def values(self) -> list[complex]:
        return [v for v, _ in self.roots]

    def multiset(self) -> list[complex]:
        return [v for v, m in self.roots for _ in range(m)]

    def distance_to(self, value: complex) -> float:
        return min(abs(v - value) for v in self.values)

    def contains(self, value: complex, tol: float | None = None) -> bool:
        tol = config.CLUSTER_TOL if tol is None else tol
        return self.distance_to(value) <= tol


# -------- roots ----------
def _backward_bound(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    a = np.abs(coeffs)
    return 4 * (n + 1) * np.finfo(float).eps * (P.polyval(np.abs(z), a) + a.max())


def aberth_roots(coeffs: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """All roots of a monic polynomial (ascending coefficients), Aberth-Ehrlich iteration.

    Starts on a circle of the Fujiwara radius with an irrational angular offset; a root is frozen
    once |p(z)| sits inside the rounding-error bound, so clusters around multiple roots settle too.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-coeffs[0]])
    dcoeffs = P.polyder(coeffs)
    ratios = np.abs(coeffs[:-1][::-1]) ** (1.0 / np.arange(1, n + 1))
    radius = 2 * float(np.max(ratios)) or 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        val = P.polyval(z, coeffs)
        active &= np.abs(val) > _backward_bound(coeffs, z)
        if not active.any():
            return z
        vald = P.polyval(z, dcoeffs)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            inv = np.where(diff != 0, 1 / diff, 0)
            np.fill_diagonal(inv, 0)
            w = val / vald
            delta = w / (1 - w * inv.sum(axis=1))
        delta = np.where(np.isfinite(delta), delta, 0)
        z = np.where(active, z - delta, z)
    raise RootIterationStalled(f"aberth did not settle after {max_iter} iterations")


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    try:
        return aberth_roots(coeffs)
    except RootIterationStalled as e:
        log.warning(f"{e}; falling back to companion-matrix eigenvalues")
        return P.polyroots(coeffs)


def _taylor(coeffs: np.ndarray, z: complex, j: int) -> tuple[complex, float]:
    """j-th Taylor coefficient of p at z and its rounding scale."""
    d = P.polyder(coeffs, j) if j else coeffs
    return P.polyval(z, d) / factorial(j), max(1.0, float(P.polyval(abs(z), np.abs(d)))) / factorial(j)


def _cluster_center(coeffs: np.ndarray, points: np.ndarray, steps: int = 3) -> complex:
    """Newton on p^(m-1), whose root is simple where p has a root of multiplicity m."""
    m = len(points)
    c0 = complex(np.mean(points))
    spread = float(np.max(np.abs(points - c0)))
    f, df = P.polyder(coeffs, m - 1), P.polyder(coeffs, m)
    z = c0
    for _ in range(steps):
        d = P.polyval(z, df)
        if d == 0:
            break
        z = z - P.polyval(z, f) / d
    z = complex(z)
    return z if np.isfinite(z) and abs(z - c0) <= 2 * spread + np.finfo(float).eps else c0


def _is_multiple_root(coeffs: np.ndarray, c: complex, m: int, radius: float) -> bool:
    """p(c + h) = sum t_j h^j has all m roots within radius of c: |t_j| <= C(m, j) |t_m| radius^(m - j)."""
    lead, _ = _taylor(coeffs, c, m)
    for j in range(m):
        tj, scale = _taylor(coeffs, c, j)
        if abs(tj) > comb(m, j) * abs(lead) * radius ** (m - j) + TAYLOR_TOL * scale:
            return False
    return True


def linked_groups(count: int, linked) -> list[list[int]]:
    """Connected components of the graph on range(count) with an edge wherever linked(i, j)."""
    if count == 0:
        return []
    adjacency = np.zeros((count, count), dtype=bool)
    for i, j in itertools.combinations(range(count), 2):
        adjacency[i, j] = linked(i, j)
    _, labels = connected_components(scipy.sparse.csr_matrix(adjacency), directed=False)
    groups: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        groups.setdefault(int(label), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _within(points: np.ndarray, radius: float) -> list[list[int]]:
    return linked_groups(len(points), lambda i, j: abs(points[i] - points[j]) <= radius)


def _split(coeffs: np.ndarray, roots: np.ndarray, radii: tuple[float, ...],
           cluster_tol: float) -> list[tuple[complex, int]]:
    if not radii:
        return [(complex(np.mean(roots[g])), len(g)) for g in _within(roots, cluster_tol)]
    out: list[tuple[complex, int]] = []
    for g in _within(roots, radii[0]):
        sub = roots[g]
        if len(g) == 1:
            out.append((complex(sub[0]), 1))
            continue
        c = _cluster_center(coeffs, sub)
        if _is_multiple_root(coeffs, c, len(g), cluster_tol):
            out.append((c, len(g)))
        else:
            out.extend(_split(coeffs, sub, radii[1:], cluster_tol))
    return out


def cluster_roots(roots: np.ndarray, coeffs: np.ndarray, cluster_tol: float | None = None) -> list[tuple[complex, int]]:
    """Group computed roots into (value, multiplicity).

    Candidate groups are formed coarse to fine; a group of m roots is kept when the Taylor
    coefficients of p at its polished center fit m roots within cluster_tol, otherwise it is split
    at the next radius. What survives every radius is merged by single linkage at cluster_tol.
    """
    cluster_tol = config.CLUSTER_TOL if cluster_tol is None else cluster_tol
    roots = np.asarray(roots, dtype=complex)
    radii = tuple(r for r in CLUSTER_RADII if r > cluster_tol)
    return _split(np.asarray(coeffs, dtype=complex), roots, radii, cluster_tol)


def _polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    dcoeffs = P.polyder(coeffs)
    for _ in range(steps):
        d = P.polyval(z, dcoeffs)
        if d == 0:
            break
        z = z - P.polyval(z, coeffs) / d
    return complex(z)


def _clean(v: complex, tol: float = 1e-14) -> complex:
    re = 0.0 if abs(v.real) < tol else v.real
    im = 0.0 if abs(v.imag) < tol else v.imag
    return complex(re, im)


def spectrum_from_charpoly(p: CharPoly, cluster_tol: float | None = None) -> Spectrum:
    roots = polynomial_roots(p.coeffs)
    clustered = cluster_roots(roots, p.coeffs, cluster_tol)
    clustered = [(_clean(_polish(p.coeffs, v)) if m == 1 else _clean(v), m) for v, m in clustered]
    clustered.sort(key=lambda vm: (round(vm[0].real, 9), round(vm[0].imag, 9)))
    return Spectrum(clustered)


def spectrum_of(A: Algebra, c, cluster_tol: float | None = None) -> Spectrum:
    return spectrum_from_charpoly(char_poly(A, c), cluster_tol)


def trace_of(A: Algebra, c) -> complex:
    return complex(np.trace(left_mult_matrix(A, c)))


def peirce_data(A: Algebra, c, spectrum: Spectrum | None = None,
                rank_tol: float | None = None) -> tuple[list[tuple[complex, int]], bool]:
    """Kernel dimension of L_c - lambda I per Peirce number; semisimple iff they sum to n."""
    rank_tol = config.RANK_TOL if rank_tol is None else rank_tol
    spectrum = spectrum or spectrum_of(A, c)
    L = left_mult_matrix(A, c)
    scale = max(1.0, float(np.linalg.norm(L, 2)))
    dims = []
    for lam, _ in spectrum.roots:
        s = scipy.linalg.svdvals(L - lam * np.eye(A.dim))
        dims.append((lam, int(np.sum(s <= rank_tol * scale))))
    return dims, sum(d for _, d in dims) == A.dim


def peirce_space(A: Algebra, c, lam: complex, rank_tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of A_c(lam) = ker(L_c - lam I)."""
    rank_tol = config.RANK_TOL if rank_tol is None else rank_tol
    L = left_mult_matrix(A, c)
    scale = max(1.0, float(np.linalg.norm(L, 2)))
    _, s, vh = scipy.linalg.svd(L - lam * np.eye(A.dim))
    rank = int(np.sum(s > rank_tol * scale))
    return vh[rank:].conj().T


@dataclass
class IdempotentRecord:
    point: Element
    residual: float
    charpoly: CharPoly
    spectrum: Spectrum
    peirce_dims: list[tuple[complex, int]]
    semisimple: bool
    regular: bool
    is_real: bool
    half_distance: float
    jacobian_min_singular_value: float = float("nan")
    multiplicity_estimate: int = 1
    family_witness: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return float(np.linalg.norm(self.point)) < ZERO_NORM

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.point))


def make_record(A: Algebra, point, residual: float, jacobian_min_singular_value: float = float("nan"),
                multiplicity_estimate: int = 1, family_witness: bool = False,
                cluster_tol: float | None = None, rank_tol: float | None = None) -> IdempotentRecord:
    cluster_tol = config.CLUSTER_TOL if cluster_tol is None else cluster_tol
    point = np.asarray(point, dtype=complex)
    p = char_poly(A, point)
    spec = spectrum_from_charpoly(p, cluster_tol)
    dims, semisimple = peirce_data(A, point, spec, rank_tol)
    half = spec.distance_to(0.5)
    return IdempotentRecord(
        point=point,
        residual=float(residual),
        charpoly=p,
        spectrum=spec,
        peirce_dims=dims,
        semisimple=semisimple,
        regular=half > cluster_tol,
        is_real=bool(np.max(np.abs(point.imag)) < REAL_TOL * (1 + np.linalg.norm(point))),
        half_distance=half,
        jacobian_min_singular_value=float(jacobian_min_singular_value),
        multiplicity_estimate=multiplicity_estimate,
        family_witness=family_witness,
    )


# -------- genericity ----------
@dataclass(frozen=True)
class GenericityVerdict:
    kind: str
    evidence: str
    inconsistent: bool = False

    @property
    def generic(self) -> bool:
        return self.kind == "generic"


KINDS = ("generic", "nongeneric_half_in_spectrum", "nongeneric_nilpotent",
         "nongeneric_infinite_family", "undetermined")


def classify_genericity(A: Algebra, S: "IdempotentSet") -> GenericityVerdict:
    n = A.dim
    count = len(S.idempotents)
    half = [r for r in S.idempotents if not r.regular]
    if S.has_infinite_family:
        witnesses = sum(r.family_witness for r in S.idempotents)
        return GenericityVerdict("nongeneric_infinite_family",
                                 f"{witnesses} refined endpoints lie on a positive-dimensional family of idempotents")
    if S.nilpotent_directions:
        return GenericityVerdict("nongeneric_nilpotent",
                                 f"{len(S.nilpotent_directions)} nilpotent direction(s); {count} of {2 ** n} idempotents")
    if half and count < 2 ** n:
        worst = min(r.half_distance for r in half)
        return GenericityVerdict("nongeneric_half_in_spectrum",
                                 f"{len(half)} idempotent(s) with 1/2 in the spectrum (distance {worst:.3e}); "
                                 f"{count} of {2 ** n} idempotents")
    if not S.exhaustive:
        return GenericityVerdict("undetermined", f"{S.paths_failed} of {S.paths_total} paths failed")
    if count != 2 ** n:
        return GenericityVerdict("undetermined",
                                 f"{count} distinct idempotents, expected {2 ** n} with no nilpotents")
    if half:
        worst = min(r.half_distance for r in half)
        return GenericityVerdict("undetermined",
                                 f"{2 ** n} idempotents but {len(half)} with 1/2 in the spectrum "
                                 f"(distance {worst:.3e})", inconsistent=True)
    mismatched = [r for r in S.idempotents if np.isfinite(r.jacobian_min_singular_value)
                  and (r.jacobian_min_singular_value > 1e-8) != r.regular]
    evidence = f"{count} = 2^{n} idempotents, no nilpotents, all regular"
    if mismatched:
        evidence += f"; {len(mismatched)} record(s) where the Jacobian and p(1/2) disagree on regularity"
    return GenericityVerdict("generic", evidence)


def _require_generic(S: "IdempotentSet"):
    verdict = classify_genericity(S.algebra, S)
    if not verdict.generic:
        raise NotGenericError(f"{verdict.kind}: {verdict.evidence}")


def nonzero_records(S: "IdempotentSet") -> list[IdempotentRecord]:
    return [r for r in S.idempotents if not r.is_zero]


def _dedup_values(values, tol: float) -> list[complex]:
    out: list[complex] = []
    for v in values:
        if all(abs(v - w) > tol for w in out):
            out.append(v)
    return sorted(out, key=lambda v: (round(v.real, 9), round(v.imag, 9)))


def algebra_spectrum(S: "IdempotentSet", cluster_tol: float | None = None) -> list[complex]:
    cluster_tol = S.cluster_tol if cluster_tol is None else cluster_tol
    return _dedup_values((v for r in nonzero_records(S) for v in r.spectrum.values), cluster_tol)


def same_multiset(a: list[complex], b: list[complex], tol: float) -> bool:
    if len(a) != len(b):
        return False
    rest = list(b)
    for v in a:
        k = min(range(len(rest)), key=lambda i: abs(rest[i] - v))
        if abs(rest[k] - v) > tol:
            return False
        rest.pop(k)
    return True


@dataclass(frozen=True)
class ConstantSpectrumFinding:
    holds: bool
    spectrum: list[complex]
    report: str


def constant_spectrum_check(S: "IdempotentSet", tol: float | None = None) -> ConstantSpectrumFinding:
    _require_generic(S)
    tol = S.cluster_tol if tol is None else tol
    records = nonzero_records(S)
    first = records[0].spectrum.multiset()
    for r in records[1:]:
        if not same_multiset(first, r.spectrum.multiset(), tol):
            return ConstantSpectrumFinding(False, [], "nonzero idempotents have different spectra")
    n = S.algebra.dim
    unity = [complex(np.exp(2j * np.pi * k / n)) for k in range(n)]
    if not same_multiset(first, unity, tol):
        raise TheoryInconsistencyError(f"constant spectrum {first} is not the set of {n}-th roots of unity")
    return ConstantSpectrumFinding(True, first, f"all {len(records)} nonzero idempotents share the {n}-th roots of unity")


@dataclass(frozen=True)
class CommonEigenvalueFinding:
    values: list[complex]
    report: str


def common_eigenvalue_check(S: "IdempotentSet", tol: float | None = None) -> CommonEigenvalueFinding:
    _require_generic(S)
    tol = S.cluster_tol if tol is None else tol
    records = nonzero_records(S)
    n = S.algebra.dim
    common = [v for v in records[0].spectrum.values
              if abs(v - 1) > tol and all(r.spectrum.contains(v, tol) for r in records[1:])]
    for v in common:
        if abs(v ** n - 1) > 1e-8 * max(1.0, abs(v) ** n):
            raise TheoryInconsistencyError(f"common eigenvalue {v} has {v}^{n} != 1")
    common = _dedup_values(common, tol)
    report = f"{len(common)} common eigenvalue(s) besides 1" if common else "no common eigenvalue besides 1"
    return CommonEigenvalueFinding(common, report)
