"""
polysolve.py
• All idempotents (x^2 = x) by total-degree homotopy continuation with the gamma trick,
  tracked in projective space on a random affine chart so that endpoints at infinity
  (x0 = 0, the 2-nilpotent directions) are reached at finite coordinates.
• Newton refinement on f(x) = x^2 - x (Jacobian 2 L_x - I), deduplication by union-find,
  detection of positive-dimensional families by perturbed restarts.
• 2-nilpotent directions from the homogeneous system on a random chart.
• Closed-form enumeration for dimension two.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import polynomial as P
import scipy.linalg

from . import config
from .algebra import Algebra, Element, as_element, left_mult_matrix, multiply, square
from .errors import ChartDegenerateError, ConfigError, DimensionMismatchError, DimensionTooLargeError
from .spectral import IdempotentRecord, linked_groups, make_record

log = logging.getLogger(__name__)

SINGULAR_TOL = 1e-8
NILPOTENT_TOL = 1e-10
# products of directions in one nilpotent family; refined directions are only sqrt-accurate there
NILPOTENT_GROUP_TOL = NILPOTENT_TOL ** 0.5
MAX_CORRECTOR = 3
CHART_RETRIES = 3


@dataclass(frozen=True)
class SolveConfig:
    seed: int = config.SEED
    track_tol: float = config.TRACK_TOL
    ds_init: float = config.DS_INIT
    ds_min: float = config.DS_MIN
    ds_max: float = config.DS_MAX
    divergence_norm: float = config.DIVERGENCE_NORM
    dedup_tol: float = config.DEDUP_TOL
    refine_tol: float = config.REFINE_TOL
    max_newton: int = config.MAX_NEWTON
    max_steps: int = config.MAX_STEPS
    endgame_start: float = config.ENDGAME_START
    cluster_tol: float = config.CLUSTER_TOL

    def __post_init__(self):
        if not (0 < self.ds_min <= self.ds_init <= self.ds_max < 1):
            raise ConfigError(f"need 0 < ds_min <= ds_init <= ds_max < 1, got "
                              f"{self.ds_min}, {self.ds_init}, {self.ds_max}")
        for name in ("track_tol", "divergence_norm", "dedup_tol", "refine_tol", "cluster_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.max_newton < 1 or self.max_steps < 1:
            raise ConfigError("max_newton and max_steps must be at least 1")

    def with_overrides(self, **kw) -> "SolveConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass
class PathEndpoint:
    status: str  # converged | at_infinity | failed
    point: Element
    residual: float
    jacobian_min_singular_value: float = float("nan")
    steps: int = 0


@dataclass
class IdempotentSet:
    algebra: Algebra
    idempotents: list[IdempotentRecord]
    nilpotent_directions: list[Element]
    paths_total: int
    paths_failed: int
    exhaustive: bool
    has_infinite_family: bool
    paths_at_infinity: int = 0
    nilpotent_family: bool = False
    seed: int = 0
    dedup_tol: float = config.DEDUP_TOL
    cluster_tol: float = config.CLUSTER_TOL
    endpoints: list[PathEndpoint] = field(default_factory=list, repr=False)

    @property
    def count(self) -> int:
        return len(self.idempotents)

    def points(self) -> list[Element]:
        return [r.point for r in self.idempotents]


# -------- quadratic systems ----------
@dataclass(frozen=True)
class _QuadraticSystem:
    """F_k(y) = sum_ij Q[i,j,k] y_i y_j + sum_j B[k,j] y_j + c[k], homogenized with y0."""
    Q: np.ndarray
    B: np.ndarray
    c: np.ndarray

    @property
    def size(self) -> int:
        return len(self.c)

    def value(self, Y):
        y0, y = Y[0], Y[1:]
        return np.einsum("i,j,ijk->k", y, y, self.Q) + y0 * (self.B @ y) + y0 * y0 * self.c

    def jacobian(self, Y):
        y0, y = Y[0], Y[1:]
        dy = 2 * np.einsum("i,ijk->kj", y, self.Q) + y0 * self.B
        dy0 = self.B @ y + 2 * y0 * self.c
        return np.column_stack([dy0, dy])


def _idempotent_system(A: Algebra) -> _QuadraticSystem:
    return _QuadraticSystem(A.tensor, -np.eye(A.dim, dtype=complex), np.zeros(A.dim, dtype=complex))


class _Homotopy:
    """H(Y, s) = (1 - s) gamma (y_k^2 - y0^2) + s F(Y), plus the chart a.Y = 1."""

    def __init__(self, target: _QuadraticSystem, gamma: complex, chart: np.ndarray):
        self.target = target
        self.gamma = gamma
        self.chart = chart

    def start_value(self, Y):
        return Y[1:] ** 2 - Y[0] ** 2

    def start_jacobian(self, Y):
        return np.column_stack([-2 * Y[0] * np.ones(len(Y) - 1), np.diag(2 * Y[1:])])

    def value(self, Y, s):
        h = (1 - s) * self.gamma * self.start_value(Y) + s * self.target.value(Y)
        return np.append(h, self.chart @ Y - 1)

    def jacobian(self, Y, s):
        J = (1 - s) * self.gamma * self.start_jacobian(Y) + s * self.target.jacobian(Y)
        return np.vstack([J, self.chart])

    def ds_derivative(self, Y):
        return np.append(self.target.value(Y) - self.gamma * self.start_value(Y), 0)


def _solve(J, rhs):
    try:
        return np.linalg.solve(J, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(J, rhs, rcond=None)[0]


def _correct(H: _Homotopy, Y, s, cfg: SolveConfig, iterations: int = MAX_CORRECTOR):
    prev = np.inf
    for _ in range(iterations):
        dY = _solve(H.jacobian(Y, s), -H.value(Y, s))
        Y = Y + dY
        size = float(np.linalg.norm(dY))
        if not np.isfinite(size) or size > 0.5 * prev:
            return False, Y
        if size <= cfg.track_tol * (1 + float(np.linalg.norm(Y))):
            return True, Y
        prev = size
    return False, Y


def _endgame(H: _Homotopy, Y, cfg: SolveConfig):
    """Newton (least squares) directly on the target system at s = 1."""
    for _ in range(cfg.max_newton):
        J = H.jacobian(Y, 1.0)
        dY = np.linalg.lstsq(J, -H.value(Y, 1.0), rcond=None)[0]
        Y = Y + dY
        if not np.all(np.isfinite(Y)):
            break
        if np.linalg.norm(dY) <= cfg.track_tol * (1 + np.linalg.norm(Y)):
            break
    return Y


def _track(H: _Homotopy, Y, cfg: SolveConfig):
    """Euler predictor, Newton corrector, adaptive step; returns (Y, ok, steps)."""
    s, ds, streak, steps = 0.0, cfg.ds_init, 0, 0
    while s < 1.0:
        steps += 1
        if steps > cfg.max_steps:
            return Y, False, steps
        h = min(ds, 1.0 - s)
        dY = _solve(H.jacobian(Y, s), -H.ds_derivative(Y))
        ok, Yc = _correct(H, Y + h * dY, s + h, cfg)
        if ok and np.all(np.isfinite(Yc)):
            Y, s = Yc, (1.0 if h == 1.0 - s else s + h)
            streak += 1
            if streak >= 4:
                ds, streak = min(1.5 * ds, cfg.ds_max), 0
            continue
        ds, streak = ds / 2, 0
        if ds < cfg.ds_min:
            if s > cfg.endgame_start:
                Y = _endgame(H, Y, cfg)
                return Y, bool(np.all(np.isfinite(Y))), steps
            return Y, False, steps
    return Y, True, steps


def _random_unit_complex(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def _random_chart(rng, size: int) -> np.ndarray:
    a = rng.normal(size=size) + 1j * rng.normal(size=size)
    return a / np.linalg.norm(a)


def _track_all(target: _QuadraticSystem, rng, cfg: SolveConfig):
    m = target.size
    gamma = _random_unit_complex(rng)
    chart = _random_chart(rng, m + 1)
    H = _Homotopy(target, gamma, chart)
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=m):
        Y = np.array((1.0,) + signs, dtype=complex)
        Y = Y / (chart @ Y)
        try:
            Y, ok, steps = _track(H, Y, cfg)
        except (np.linalg.LinAlgError, FloatingPointError) as e:
            log.warning(f"path {signs} failed: {e}")
            Y, ok, steps = Y, False, 0
        out.append((Y, ok, steps))
    return out


# -------- refinement ----------
def _min_singular(A: Algebra, x) -> float:
    J = 2 * left_mult_matrix(A, x) - np.eye(A.dim)
    return float(scipy.linalg.svdvals(J)[-1])


def _polish_singular(A: Algebra, x, residual: float, steps: int):
    """Keep stepping at a singular solution while the residual still halves; Newton is only linear there."""
    eye = np.eye(A.dim)
    for _ in range(steps):
        f = square(A, x) - x
        J = 2 * left_mult_matrix(A, x) - eye
        y = x + np.linalg.lstsq(J, -f, rcond=None)[0]
        r = float(np.linalg.norm(square(A, y) - y))
        if not r < residual / 2:
            break
        x, residual = y, r
    return x, residual


def newton_refine(A: Algebra, x, cfg: SolveConfig | None = None) -> PathEndpoint:
    """Newton on f(x) = x^2 - x; least-squares steps keep it usable at singular solutions.

    steps counts the iterations needed to reach refine_tol; a regular solution then gets one
    more step to bring it to working precision.
    """
    cfg = cfg or SolveConfig()
    x = as_element(A, x).copy()
    eye = np.eye(A.dim)
    residual = float("inf")
    for it in range(cfg.max_newton + 1):
        f = square(A, x) - x
        residual = float(np.linalg.norm(f))
        if not np.isfinite(residual):
            return PathEndpoint("failed", x, residual, steps=it)
        if residual < cfg.refine_tol * (1 + np.linalg.norm(x)):
            sigma = _min_singular(A, x)
            if sigma < SINGULAR_TOL:
                x, residual = _polish_singular(A, x, residual, cfg.max_newton)
            else:
                y = x + np.linalg.lstsq(2 * left_mult_matrix(A, x) - eye, -f, rcond=None)[0]
                r = float(np.linalg.norm(square(A, y) - y))
                if r <= residual:
                    x, residual = y, r
            return PathEndpoint("converged", x, residual, sigma, steps=it)
        if it == cfg.max_newton:
            break
        J = 2 * left_mult_matrix(A, x) - eye
        x = x + np.linalg.lstsq(J, -f, rcond=None)[0]
    return PathEndpoint("failed", x, residual, steps=cfg.max_newton)


def _lex_key(x) -> tuple:
    return tuple(v for z in x for v in (z.real, z.imag))


def _dedup(points: list[Element], tol: float) -> list[list[int]]:
    def close(i, j):
        scale = 1 + max(np.linalg.norm(points[i]), np.linalg.norm(points[j]))
        return np.linalg.norm(points[i] - points[j]) <= tol * scale

    return linked_groups(len(points), close)


def _on_family(A: Algebra, x, rng, cfg: SolveConfig, tries: int = 3) -> bool:
    """Restarts from a singular solution, moved along ker(2 L_x - I) and at random, land on distinct nearby solutions."""
    scale = 1 + float(np.linalg.norm(x))
    tangent = scipy.linalg.svd(2 * left_mult_matrix(A, x) - np.eye(A.dim))[2][-1].conj()
    moves = [tangent, -tangent]
    moves += [rng.normal(size=A.dim) + 1j * rng.normal(size=A.dim) for _ in range(tries)]
    for v in moves:
        ep = newton_refine(A, x + 1e-4 * scale * v / np.linalg.norm(v), cfg)
        if ep.status != "converged":
            continue
        d = float(np.linalg.norm(ep.point - x))
        if 10 * cfg.dedup_tol * scale < d < 1e-2 * scale:
            return True
    return False


def _canonical_direction(v) -> Element:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9)))
    return v * (abs(v[k]) / v[k])


def _sort_records(records: list[IdempotentRecord]) -> list[IdempotentRecord]:
    return sorted(records, key=lambda r: (round(r.norm, 9),) + tuple(round(v, 9) for v in _lex_key(r.point)))


def _check_dim(A: Algebra):
    if A.dim > config.MAX_DIM:
        raise DimensionTooLargeError(f"dim {A.dim} > {config.MAX_DIM}: 2^n paths is beyond desk scale")


def solve_idempotents(A: Algebra, cfg: SolveConfig | None = None) -> IdempotentSet:
    cfg = cfg or SolveConfig()
    _check_dim(A)
    n = A.dim
    rng = np.random.default_rng([cfg.seed, 0])
    tracked = _track_all(_idempotent_system(A), rng, cfg)

    endpoints: list[PathEndpoint] = []
    for Y, ok, steps in tracked:
        x0, x = Y[0], Y[1:]
        xnorm = float(np.linalg.norm(x))
        if not ok or not np.all(np.isfinite(Y)):
            endpoints.append(PathEndpoint("failed", x, float("nan"), steps=steps))
        elif abs(x0) * cfg.divergence_norm <= xnorm:
            endpoints.append(PathEndpoint("at_infinity", _canonical_direction(x), 0.0, steps=steps))
        else:
            ep = newton_refine(A, x / x0, cfg)
            ep.steps = steps
            if ep.status != "converged" and abs(x0) * np.sqrt(cfg.divergence_norm) <= xnorm:
                ep = PathEndpoint("at_infinity", _canonical_direction(x), 0.0, steps=steps)
            endpoints.append(ep)

    failed = sum(ep.status == "failed" for ep in endpoints)
    at_inf = sum(ep.status == "at_infinity" for ep in endpoints)
    finite = sorted((ep for ep in endpoints if ep.status == "converged"), key=lambda ep: _lex_key(ep.point))
    log.info(f"{A.label or 'algebra'}: {len(endpoints)} paths, {len(finite)} finite, "
             f"{at_inf} at infinity, {failed} failed")

    family_rng = np.random.default_rng([cfg.seed, 2])
    records = []
    infinite = False
    for group in _dedup([ep.point for ep in finite], cfg.dedup_tol):
        best = min(group, key=lambda i: finite[i].residual)
        ep = finite[best]
        witness = ep.jacobian_min_singular_value < SINGULAR_TOL and _on_family(A, ep.point, family_rng, cfg)
        infinite |= witness
        records.append(make_record(A, ep.point, ep.residual, ep.jacobian_min_singular_value,
                                   multiplicity_estimate=len(group), family_witness=witness,
                                   cluster_tol=cfg.cluster_tol))
    records = _sort_records(records)

    search = NilpotentSearch([], False, True)
    if at_inf > 0 or (len(records) < 2 ** n and not infinite):
        search = _nilpotent_search(A, cfg)

    result = IdempotentSet(
        algebra=A,
        idempotents=records,
        nilpotent_directions=[g[0] for g in search.groups],
        paths_total=2 ** n,
        paths_failed=failed,
        exhaustive=failed == 0 and search.complete,
        has_infinite_family=infinite,
        paths_at_infinity=at_inf,
        nilpotent_family=search.family,
        seed=cfg.seed,
        dedup_tol=cfg.dedup_tol,
        cluster_tol=cfg.cluster_tol,
        endpoints=endpoints,
    )
    log.info(f"{A.label or 'algebra'}: {result.count} idempotents, "
             f"{len(result.nilpotent_directions)} nilpotent direction(s), infinite family={infinite}")
    return result


# -------- nilpotents ----------
@dataclass
class NilpotentSearch:
    groups: list[list[Element]]
    family: bool
    complete: bool


def _nilpotent_step(A: Algebra, x, chart):
    F = np.append(square(A, x), chart @ x - 1)
    J = np.vstack([2 * left_mult_matrix(A, x), chart])
    return x + np.linalg.lstsq(J, -F, rcond=None)[0]


def _refine_nilpotent(A: Algebra, x, chart, cfg: SolveConfig):
    """Gauss-Newton on [x^2 = 0, chart.x = 1], continued while the residual keeps dropping.

    Nilpotent sets are often singular, where Gauss-Newton is only linear.
    """
    def residual(x):
        return float(np.linalg.norm(np.append(square(A, x), chart @ x - 1)))

    def small(x):
        return (np.linalg.norm(square(A, x)) <= NILPOTENT_TOL * (1 + np.linalg.norm(x)) ** 2
                and abs(chart @ x - 1) < 1e-10)

    for _ in range(cfg.max_newton):
        if small(x):
            break
        x = _nilpotent_step(A, x, chart)
        if not np.all(np.isfinite(x)):
            return x, False
    if not small(x):
        return x, False
    r = residual(x)
    for _ in range(cfg.max_newton):
        y = _nilpotent_step(A, x, chart)
        ry = residual(y)
        if not ry < 0.9 * r:
            break
        x, r = y, ry
    return x, True


def _annihilate(A: Algebra, d, u) -> bool:
    return bool(np.linalg.norm(multiply(A, d, u)) <= NILPOTENT_GROUP_TOL * (1 + np.abs(A.tensor).max()))


def _group_nilpotents(A: Algebra, directions: list[Element]) -> list[list[Element]]:
    """Directions whose pairwise products vanish span a family of nilpotents; one group each."""
    groups: list[list[Element]] = []
    for d in directions:
        for g in groups:
            if all(_annihilate(A, d, u) for u in g):
                g.append(d)
                break
        else:
            groups.append([d])
    return groups


def _nilpotent_on_family(A: Algebra, d, chart, rng, cfg: SolveConfig, tries: int = 3) -> bool:
    """Perturbed restarts on the chart reach distinct nilpotents that annihilate d."""
    x = d / (chart @ d)
    scale = float(np.linalg.norm(x))
    for _ in range(tries):
        noise = rng.normal(size=A.dim) + 1j * rng.normal(size=A.dim)
        y, good = _refine_nilpotent(A, x + 1e-4 * scale * noise / np.linalg.norm(noise), chart, cfg)
        if not good:
            continue
        e = _canonical_direction(y)
        gap = float(np.sqrt(max(0.0, 2 - 2 * abs(np.vdot(d, e)))))
        if 10 * cfg.dedup_tol < gap < 1e-2 and _annihilate(A, d, e):
            return True
    return False


def _nilpotent_search(A: Algebra, cfg: SolveConfig) -> NilpotentSearch:
    """Homotopy on the random chart <a, x> = 1; up to CHART_RETRIES charts until no path fails."""
    n = A.dim
    if n == 1:
        zero = abs(A.tensor[0, 0, 0]) < NILPOTENT_TOL
        return NilpotentSearch([[np.ones(1, dtype=complex)]] if zero else [], False, True)
    T = A.tensor
    best: NilpotentSearch | None = None
    for attempt in range(CHART_RETRIES):
        rng = np.random.default_rng([cfg.seed, 1, attempt])
        a = _random_chart(rng, n)
        xp = a.conj() / np.vdot(a, a).real
        N = scipy.linalg.null_space(a[None, :])
        R = rng.normal(size=(n - 1, n)) + 1j * rng.normal(size=(n - 1, n))
        Q = np.einsum("ijk,lk->ijl", np.einsum("ai,bj,abk->ijk", N, N, T), R)
        B = R @ (2 * np.einsum("a,bj,abk->kj", xp, N, T))
        c = R @ np.einsum("a,b,abk->k", xp, xp, T)
        tracked = _track_all(_QuadraticSystem(Q, B, c), rng, cfg)

        failures = 0
        found: list[Element] = []
        for Y, ok, _ in tracked:
            if not ok:
                failures += 1
                continue
            if abs(Y[0]) * cfg.divergence_norm <= np.linalg.norm(Y[1:]):
                continue
            x, good = _refine_nilpotent(A, xp + N @ (Y[1:] / Y[0]), a, cfg)
            if not good:
                continue
            d = _canonical_direction(x)
            if all(abs(np.vdot(d, e)) < 1 - cfg.dedup_tol for e in found):
                found.append(d)
        groups = _group_nilpotents(A, found)
        family = any(len(g) > 1 or _nilpotent_on_family(A, g[0], a, rng, cfg) for g in groups)
        search = NilpotentSearch(groups, family, failures == 0)
        if search.complete:
            return search
        log.warning(f"nilpotent chart attempt {attempt}: {failures} failed paths, retrying")
        if best is None or len(search.groups) > len(best.groups):
            best = search
    log.warning(f"{CHART_RETRIES} random charts left failed paths; the nilpotent search is incomplete")
    return best


def detect_nilpotents(A: Algebra, cfg: SolveConfig | None = None) -> list[Element]:
    """Unit-norm 2-nilpotent directions; one witness per linear family of mutually annihilating ones."""
    cfg = cfg or SolveConfig()
    _check_dim(A)
    search = _nilpotent_search(A, cfg)
    if not search.complete:
        raise ChartDegenerateError(f"{CHART_RETRIES} random charts failed for the nilpotent system "
                                   f"({len(search.groups)} direction(s) found before giving up)")
    return [g[0] for g in search.groups]


# -------- dimension two ----------
@dataclass(frozen=True)
class TwoDimCase:
    kind: str  # third_idempotent | nilpotent | half_in_spectrum
    alpha: complex
    beta: complex
    element: Element | None


def third_idempotent_2d(A: Algebra, c1, c2, tol: float = 1e-12) -> TwoDimCase:
    """Trichotomy for two distinct nonzero idempotents of a 2-dimensional algebra."""
    if A.dim != 2:
        raise DimensionMismatchError("third_idempotent_2d needs a 2-dimensional algebra")
    c1, c2 = as_element(A, c1), as_element(A, c2)
    alpha, beta = np.linalg.solve(np.column_stack([c1, c2]), multiply(A, c1, c2))
    if abs(alpha - 0.5) < tol or abs(beta - 0.5) < tol:
        return TwoDimCase("half_in_spectrum", alpha, beta, None)
    delta = 1 - 4 * alpha * beta
    if abs(delta) < tol:
        return TwoDimCase("nilpotent", alpha, beta, _canonical_direction(c1 - c2 / (2 * alpha)))
    u = (1 - 2 * alpha) / delta * c1 + (1 - 2 * beta) / delta * c2
    return TwoDimCase("third_idempotent", alpha, beta, u)


def solve_2d_closed_form(A: Algebra, cfg: SolveConfig | None = None) -> IdempotentSet:
    """Idempotents and nilpotents of a 2-dimensional algebra from the binary cubic det[v, v^2] = 0.

    A nonzero idempotent is v / k for a direction v with v^2 = k v, k != 0; k = 0 gives a nilpotent.
    """
    cfg = cfg or SolveConfig()
    if A.dim != 2:
        raise DimensionMismatchError("solve_2d_closed_form needs a 2-dimensional algebra")
    T = A.tensor
    # det[v, v^2] = g3 v1^3 + g2 v1^2 v2 + g1 v1 v2^2 + g0 v2^3
    g = np.array([-T[1, 1, 0], T[1, 1, 1] - 2 * T[0, 1, 0], 2 * T[0, 1, 1] - T[0, 0, 0], T[0, 0, 1]])
    tol = 1e-12 * (1 + float(np.abs(T).max()))
    zero = np.zeros(2, dtype=complex)
    records = [make_record(A, zero, 0.0, _min_singular(A, zero), cluster_tol=cfg.cluster_tol)]
    if np.all(np.abs(g) < tol):
        return IdempotentSet(A, records, [], 4, 0, True, has_infinite_family=True, seed=cfg.seed,
                             dedup_tol=cfg.dedup_tol, cluster_tol=cfg.cluster_tol)

    degree = int(np.max(np.nonzero(np.abs(g) >= tol)))
    directions: list[tuple[Element, int]] = []
    if degree > 0:
        roots = P.polyroots(g[:degree + 1])
        for group in _dedup([np.array([r]) for r in roots], cfg.dedup_tol):
            t = complex(np.mean([roots[i] for i in group]))
            directions.append((np.array([t, 1], dtype=complex), len(group)))
    if degree < 3:
        directions.append((np.array([1, 0], dtype=complex), 3 - degree))

    nilpotents = []
    for v, mult in directions:
        w = square(A, v)
        k = complex(np.vdot(v, w) / np.vdot(v, v))
        if abs(k) < NILPOTENT_TOL * (1 + np.linalg.norm(w)):
            nilpotents.append(_canonical_direction(v))
            continue
        ep = newton_refine(A, v / k, cfg)
        if ep.status != "converged":
            c = v / k
            ep = PathEndpoint("failed", c, float(np.linalg.norm(square(A, c) - c)), _min_singular(A, c))
            log.warning(f"closed-form idempotent {np.round(c, 6)} did not refine (residual {ep.residual:.3e})")
        records.append(make_record(A, ep.point, ep.residual, ep.jacobian_min_singular_value,
                                   multiplicity_estimate=mult, cluster_tol=cfg.cluster_tol))
    return IdempotentSet(A, _sort_records(records), nilpotents, 4, 0, True,
                         has_infinite_family=False, seed=cfg.seed,
                         dedup_tol=cfg.dedup_tol, cluster_tol=cfg.cluster_tol)
