"""
syzygy.py
• Residuals of the idempotent syzygies of a generic algebra:
    sum over Idm0 of p_c(t) / p_c(1/2) = 2^n for every t,
  its derivatives at 1/2, the vector and polynomial-map forms, the nonzero-idempotent forms,
  and the unital forms over conjugate-pair representatives.
• The two-dimensional relation 4 l1 l2 l3 - l1 - l2 - l3 + 1 = 0 and its reciprocal form.

All identities are written with the monic p(t) = det(tI - L_c). Each one only involves ratios
p_c(t)/p_c(1/2) or sums that vanish, so the (-1)^n between p and det(L_c - tI) cancels.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from numpy.polynomial import polynomial as P

from .algebra import Element, as_element
from .errors import (DegreeTooHighError, DivisionRemainderError, NearZeroDenominatorError,
                     UnpairedIdempotentError)
from .spectral import IdempotentRecord, _require_generic, nonzero_records

if TYPE_CHECKING:
    from .polysolve import IdempotentSet

log = logging.getLogger(__name__)

DENOMINATOR_TOL = 1e-12
REMAINDER_TOL = 1e-8


def default_t_samples() -> list[complex]:
    circle = [complex(np.exp(2j * np.pi * k / 20)) for k in range(20)]
    return circle + [0j, 1 + 0j, 2 + 0j, -1 + 0j]


def default_s_samples() -> list[complex]:
    return [0.25 + 0j, 0.5 + 0j, 1 + 0j, 2 + 0j, 0.3 + 0.4j, -0.7 + 0.1j]


@dataclass
class SyzygyReport:
    principal_max_residual: float
    derivative_residuals: list[float]
    vector_residual: float
    idemm_max_residual: float
    idemm1_max_residual: float
    unital: dict | None = None
    samples: list[complex] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        values = [self.principal_max_residual, self.vector_residual, self.idemm_max_residual,
                  self.idemm1_max_residual, *self.derivative_residuals]
        if self.unital:
            values += [v for v in self.unital.values() if isinstance(v, float)]
        return max(values)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["samples"] = [[t.real, t.imag] for t in self.samples]
        return d


def _half_value(r: IdempotentRecord) -> complex:
    v = complex(r.charpoly(0.5))
    if abs(v) < DENOMINATOR_TOL:
        raise NearZeroDenominatorError(f"|p_c(1/2)| = {abs(v):.3e} for a supposedly regular idempotent")
    return v


def principal_syzygy(S: "IdempotentSet", t_samples=None) -> float:
    _require_generic(S)
    n = S.algebra.dim
    t = np.asarray(default_t_samples() if t_samples is None else t_samples, dtype=complex)
    total = sum(r.charpoly(t) / _half_value(r) for r in S.idempotents)
    return float(np.max(np.abs(total - 2 ** n)))


def principal_syzygy_coefficients(S: "IdempotentSet") -> np.ndarray:
    """Ascending coefficients of sum p_c / p_c(1/2) - 2^n; all vanish on a generic algebra."""
    _require_generic(S)
    n = S.algebra.dim
    total = np.zeros(n + 1, dtype=complex)
    for r in S.idempotents:
        total += r.charpoly.coeffs / _half_value(r)
    total[0] -= 2 ** n
    return total


def derivative_syzygies(S: "IdempotentSet") -> list[float]:
    _require_generic(S)
    n = S.algebra.dim
    out = []
    for k in range(1, n + 1):
        s = sum(P.polyval(0.5, r.charpoly.derivative(k)) / _half_value(r) for r in S.idempotents)
        out.append(float(abs(s)))
    return out


def vector_syzygy(S: "IdempotentSet") -> float:
    _require_generic(S)
    total = sum(r.point / _half_value(r) for r in nonzero_records(S))
    return float(np.linalg.norm(total))


# H: one list per output coordinate of (coefficient, exponent tuple) monomials
PolyMap = list[list[tuple[complex, tuple[int, ...]]]]


def _eval_polymap(H: PolyMap, x: Element) -> np.ndarray:
    return np.array([sum(complex(c) * np.prod(x ** np.asarray(e)) for c, e in coord) for coord in H],
                    dtype=complex)


def general_syzygy(S: "IdempotentSet", H: PolyMap) -> float:
    n = S.algebra.dim
    for coord in H:
        for c, e in coord:
            if len(e) != n:
                raise DegreeTooHighError(f"monomial exponent {e} has the wrong arity for dimension {n}")
            if sum(e) > n - 1 and c != 0:
                raise DegreeTooHighError(f"monomial of degree {sum(e)} exceeds n - 1 = {n - 1}")
    _require_generic(S)
    total = sum(_eval_polymap(H, r.point) / _half_value(r) for r in S.idempotents)
    return float(np.linalg.norm(total))


def _without_unit_root(r: IdempotentRecord) -> np.ndarray:
    quo, rem = r.charpoly.deflate(1.0)
    if rem > REMAINDER_TOL * max(1.0, float(np.abs(r.charpoly.coeffs).max())):
        raise DivisionRemainderError(f"p_c(1) = {rem:.3e}: 1 is not an eigenvalue of a nonzero idempotent")
    return quo


def idemm_syzygies(S: "IdempotentSet", t_samples=None) -> tuple[float, float]:
    """Nonzero-idempotent forms: sum p_c(t)/p_c(1/2) = 2^n (1 - t^n), and with p_c/(t - 1)."""
    _require_generic(S)
    n = S.algebra.dim
    t = np.asarray(default_t_samples() if t_samples is None else t_samples, dtype=complex)
    records = nonzero_records(S)
    # p_0(t) = t^n and p_0(1/2) = 2^-n
    first = sum(r.charpoly(t) / _half_value(r) for r in records)
    first_res = float(np.max(np.abs(first - 2 ** n * (1 - t ** n))))
    second = 0
    for r in records:
        q = _without_unit_root(r)
        q_half = P.polyval(0.5, q)
        if abs(q_half) < DENOMINATOR_TOL:
            raise NearZeroDenominatorError(f"|q_c(1/2)| = {abs(q_half):.3e}")
        second = second + P.polyval(t, q) / q_half
    target = 2 ** (n - 1) * sum(t ** k for k in range(n))
    return first_res, float(np.max(np.abs(second - target)))


def conjugate_pairs(S: "IdempotentSet", e: Element,
                    tol: float | None = None) -> list[tuple[IdempotentRecord, IdempotentRecord]]:
    """Pairs (c, e - c) over nonzero idempotents other than e, in solver order; tol defaults to the set's dedup_tol."""
    e = as_element(S.algebra, e)
    scale = 1 + float(np.linalg.norm(e))
    tol = (S.dedup_tol if tol is None else tol) * scale
    rest = [r for r in nonzero_records(S) if np.linalg.norm(r.point - e) > tol]
    pairs, used = [], set()
    for i, r in enumerate(rest):
        if i in used:
            continue
        j = next((j for j, s in enumerate(rest)
                  if j != i and j not in used and np.linalg.norm(r.point + s.point - e) <= tol), None)
        if j is None:
            raise UnpairedIdempotentError(f"no conjugate e - c for idempotent {np.round(r.point, 6)}")
        used.update((i, j))
        pairs.append((r, rest[j]))
    return pairs


def unital_syzygies(S: "IdempotentSet", e: Element, s_samples=None) -> tuple[float, float | None]:
    _require_generic(S)
    n = S.algebra.dim
    s = np.asarray(default_s_samples() if s_samples is None else s_samples, dtype=complex)
    pairs = conjugate_pairs(S, e)
    zero = [r for r in S.idempotents if r.is_zero]
    reps = zero + [c for c, _ in pairs]
    total = sum((r.charpoly(0.5 + s) + r.charpoly(0.5 - s)) / _half_value(r) for r in reps)
    p1 = float(np.max(np.abs(total - 2 ** n)))
    if n != 4:
        return p1, None
    # r_c = p_c / (t (t - 1)); its roots are the two remaining eigenvalues
    acc = 0
    for c, _ in pairs:
        quo, rem = c.charpoly.deflate(0.0, 1.0)
        if rem > REMAINDER_TOL * max(1.0, float(np.abs(c.charpoly.coeffs).max())):
            raise DivisionRemainderError(f"p_c is not divisible by t(t - 1) (remainder {rem:.3e})")
        acc += 1 / P.polyval(0.5, quo)
    return p1, float(abs(acc - 4))


def two_dim_syzygy(l1: complex, l2: complex, l3: complex) -> complex:
    return 4 * l1 * l2 * l3 - l1 - l2 - l3 + 1


def two_dim_syzygy_reciprocal(l1: complex, l2: complex, l3: complex) -> tuple[complex, bool]:
    """sum 1/(1 - 2 l_i) - 1; (inf, True) when some l_i = 1/2."""
    lams = (l1, l2, l3)
    if any(abs(1 - 2 * l) < 1e-15 for l in lams):
        return complex(math.inf), True
    return sum(1 / (1 - 2 * l) for l in lams) - 1, False


def half_factorization(l1: complex, l2: complex) -> complex:
    return 0.5 * (2 * l1 - 1) * (2 * l2 - 1)


def syzygy_report(S: "IdempotentSet", unit: Element | None = None, t_samples=None) -> SyzygyReport:
    samples = default_t_samples() if t_samples is None else list(t_samples)
    idemm, idemm1 = idemm_syzygies(S, samples)
    report = SyzygyReport(
        principal_max_residual=principal_syzygy(S, samples),
        derivative_residuals=derivative_syzygies(S),
        vector_residual=vector_syzygy(S),
        idemm_max_residual=idemm,
        idemm1_max_residual=idemm1,
        samples=[complex(t) for t in samples],
    )
    if unit is not None:
        p1, half41 = unital_syzygies(S, unit)
        report.unital = {"p1_max_residual": p1, "half41_residual": half41}
    log.info(f"syzygies of {S.algebra.label or 'algebra'}: max residual {report.max_residual:.3e}")
    return report
