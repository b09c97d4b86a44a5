"""
algebra.py
• A finite-dimensional commutative algebra over C given by structure constants
  c[i][j][k] (e_i e_j = sum_k c[i][j][k] e_k).
• Elements are plain complex numpy vectors in the fixed basis.
• Multiplication, multiplication operators L_x, monic characteristic polynomials,
  unit search, conjugate idempotents and direct sums.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P
import scipy.linalg

from . import config
from .errors import (CommutativityError, DimensionMismatchError, InputFormatError,
                     NotIdempotentError, NotUnitalError, TheoryInconsistencyError)

log = logging.getLogger(__name__)

ASYMMETRY_TOL = 1e-12

Element = np.ndarray


@dataclass(frozen=True, eq=False)
class Algebra:
    tensor: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.array(self.tensor, dtype=complex)
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]) or t.shape[0] == 0:
            raise DimensionMismatchError(f"structure tensor must be n x n x n, got shape {t.shape}")
        if not np.all(np.isfinite(t)):
            raise InputFormatError("structure constants must be finite")
        swapped = t.transpose(1, 0, 2)
        asym = float(np.max(np.abs(t - swapped)))
        if asym > ASYMMETRY_TOL:
            raise CommutativityError(f"c[i][j][k] != c[j][i][k] (max asymmetry {asym:.3e})")
        t = (t + swapped) / 2
        t.setflags(write=False)
        object.__setattr__(self, "tensor", t)

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]

    def __repr__(self):
        return f"Algebra(dim={self.dim}, label={self.label!r})"

    # -------- JSON ----------
    def to_dict(self) -> dict:
        entries = []
        for i, j, k in zip(*np.nonzero(self.tensor)):
            v = self.tensor[i, j, k]
            entries.append([int(i), int(j), int(k), float(v.real), float(v.imag)])
        return {"dim": self.dim, "tensor": entries, "label": self.label}

    @classmethod
    def from_dict(cls, data: dict) -> "Algebra":
        try:
            n = int(data["dim"])
            t = np.zeros((n, n, n), dtype=complex)
            for i, j, k, re, im in data.get("tensor", []):
                t[int(i), int(j), int(k)] = complex(float(re), float(im))
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise InputFormatError(f"malformed algebra JSON: {e}")
        return cls(t, str(data.get("label", "")))

    @classmethod
    def load(cls, path: str | Path) -> "Algebra":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputFormatError(f"cannot read algebra from {path}: {e}")
        return cls.from_dict(data)


@dataclass(frozen=True, eq=False)
class CharPoly:
    """Monic p(t) = det(tI - L_x), ascending coefficients; det(L_x - tI) is (-1)^n p."""
    coeffs: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        return P.polyval(t, self.coeffs)

    def derivative(self, k: int = 1) -> np.ndarray:
        return P.polyder(self.coeffs, k)

    def deflate(self, *roots: complex) -> tuple[np.ndarray, float]:
        """Synthetic division by prod (t - r); returns quotient and the remainder size."""
        divisor = P.polyfromroots(roots) if roots else np.array([1.0])
        quo, rem = P.polydiv(self.coeffs, divisor)
        return quo, float(np.max(np.abs(rem))) if len(rem) else 0.0


def as_element(A: Algebra, x) -> Element:
    v = np.asarray(x, dtype=complex)
    if v.shape != (A.dim,):
        raise DimensionMismatchError(f"element of length {v.shape} does not belong to a {A.dim}-dimensional algebra")
    return v


def basis(A: Algebra, i: int) -> Element:
    e = np.zeros(A.dim, dtype=complex)
    e[i] = 1
    return e


def multiply(A: Algebra, x, y) -> Element:
    x, y = as_element(A, x), as_element(A, y)
    return np.einsum("i,j,ijk->k", x, y, A.tensor)


def square(A: Algebra, x) -> Element:
    return multiply(A, x, x)


def left_mult_matrix(A: Algebra, x) -> np.ndarray:
    """Matrix of L_x: y -> xy; equals half the Jacobian of x -> x^2."""
    x = as_element(A, x)
    return np.einsum("i,ijk->kj", x, A.tensor)


def is_idempotent(A: Algebra, x, tol: float = 1e-8) -> bool:
    x = as_element(A, x)
    return bool(np.linalg.norm(square(A, x) - x) < tol * (1 + np.linalg.norm(x)))


def faddeev_leverrier(M: np.ndarray) -> np.ndarray:
    """Ascending coefficients of det(tI - M) by the trace recursion.

    a_{n-k} = -tr(M M_k) / k with M_k = M M_{k-1} + a_{n-k+1} I; the traces are the
    power sums tau_k and the recursion is Newton's identities in matrix form.
    """
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1
    Mk = np.zeros_like(M, dtype=complex)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(M @ Mk) / k
    return coeffs


def char_poly(A: Algebra, x) -> CharPoly:
    return CharPoly(faddeev_leverrier(left_mult_matrix(A, x)))


def find_unit(A: Algebra, unit_tol: float | None = None) -> Element | None:
    """Least-squares solve of e e_i = e_i for all i; None when the system is inconsistent."""
    unit_tol = config.UNIT_TOL if unit_tol is None else unit_tol
    n = A.dim
    # row (i, k), column j: sum_j e_j c[j][i][k] = delta_ik
    M = A.tensor.transpose(1, 2, 0).reshape(n * n, n)
    rhs = np.eye(n, dtype=complex).reshape(n * n)
    e, *_ = scipy.linalg.lstsq(M, rhs)
    residual = float(np.linalg.norm(M @ e - rhs))
    if residual >= unit_tol:
        log.debug(f"no unit in {A.label or 'algebra'} (residual {residual:.3e})")
        return None
    return e


def conjugate_idempotent(A: Algebra, e, c, tol: float = 1e-8) -> Element:
    e, c = as_element(A, e), as_element(A, c)
    if np.linalg.norm(left_mult_matrix(A, e) - np.eye(A.dim)) > tol:
        raise NotUnitalError("e is not the unit of the algebra")
    if not is_idempotent(A, c, tol):
        raise NotIdempotentError("c is not an idempotent")
    cbar = e - c
    if not is_idempotent(A, cbar, tol) or np.linalg.norm(multiply(A, c, cbar)) > tol * (1 + np.linalg.norm(c)):
        raise TheoryInconsistencyError("conjugate idempotent fails (e-c)^2 = e-c or c(e-c) = 0")
    return cbar


def direct_sum(A: Algebra, B: Algebra) -> Algebra:
    n, m = A.dim, B.dim
    t = np.zeros((n + m, n + m, n + m), dtype=complex)
    t[:n, :n, :n] = A.tensor
    t[n:, n:, n:] = B.tensor
    label = f"{A.label or 'A'} + {B.label or 'B'}"
    return Algebra(t, label)
