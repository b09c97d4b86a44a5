"""
cli.py
• naidem analyze   – solve, classify, check syzygies (and metrised properties) of one algebra
• naidem solve     – solver diagnostics only
• naidem catalog   – list the named algebras or emit one as JSON
• naidem extremal  – extremal idempotent of a real cubic form

Reports go to stdout (or --out) as JSON or pandas text tables; logs go to stderr.
Exit codes: 0 success, 1 input error, 2 inconsistency found.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__, catalog, config
from .algebra import Algebra, find_unit
from .errors import (HalfNotInSpectrumError, InputFormatError, NaidemError, TheoryInconsistencyError,
                     UnpairedIdempotentError)
from .metrised import (CubicForm, InnerProduct, algebra_from_cubic, cubic_from_algebra, extremal_idempotent,
                       fusion_check, metrised_check)
from .polysolve import IdempotentSet, SolveConfig, solve_idempotents
from .spectral import (IdempotentRecord, algebra_spectrum, classify_genericity, common_eigenvalue_check,
                       constant_spectrum_check)
from .syzygy import conjugate_pairs, syzygy_report

log = logging.getLogger(__name__)

SYZYGY_TOL = 1e-6
FUSION_TOL = 1e-7
CATALOG_FLAGS = ("alpha", "eps", "l1", "l2", "k", "n")


# -------- JSON helpers ----------
def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(float(obj.real)), _jsonable(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _float17(v: float) -> str:
    text = format(v, ".17g")
    return text if any(ch in text for ch in ".en") else text + ".0"


class ReportEncoder(json.JSONEncoder):
    """Floats with 17 significant digits, so every value parses back to the same double."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        quote = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(markers, self.default, quote, self.indent, _float17,
                                             self.key_separator, self.item_separator, self.sort_keys,
                                             self.skipkeys, _one_shot)(o, 0)


def _dumps(data) -> str:
    return json.dumps(_jsonable(data), indent=2, cls=ReportEncoder) + "\n"


def record_to_dict(r: IdempotentRecord) -> dict:
    return _jsonable({
        "point": r.point,
        "residual": r.residual,
        "charpoly": r.charpoly.coeffs,
        "spectrum": r.spectrum.multiset(),
        "peirce_dims": [[v, d] for v, d in r.peirce_dims],
        "semisimple": r.semisimple,
        "regular": r.regular,
        "is_real": r.is_real,
        "half_distance": r.half_distance,
        "jacobian_min_singular_value": r.jacobian_min_singular_value,
        "multiplicity_estimate": r.multiplicity_estimate,
        "family_witness": r.family_witness,
        **r.extra,
    })


@dataclass
class AnalysisReport:
    label: str
    dim: int
    idempotents: list[dict]
    nilpotent_directions: list
    verdict: dict
    algebra_spectrum: list
    solver: dict
    syzygy: dict | None = None
    constant_spectrum: dict | None = None
    common_eigenvalues: dict | None = None
    unital: dict | None = None
    metrised: dict | None = None
    findings: list[str] = field(default_factory=list)
    version: str = __version__

    @property
    def inconsistent(self) -> bool:
        return bool(self.findings)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        return cls(**data)


def solver_diagnostics(S: IdempotentSet) -> dict:
    statuses = pd.Series([ep.status for ep in S.endpoints], dtype=object).value_counts()
    return {
        "paths_total": S.paths_total,
        "paths_failed": S.paths_failed,
        "paths_at_infinity": S.paths_at_infinity,
        "endpoint_status": {k: int(v) for k, v in sorted(statuses.items())},
        "exhaustive": S.exhaustive,
        "has_infinite_family": S.has_infinite_family,
        "nilpotent_family": S.nilpotent_family,
        "seed": S.seed,
    }


# -------- input ----------
def _number(raw: str):
    for conv in (int, float):
        try:
            return conv(raw)
        except ValueError:
            pass
    try:
        return complex(raw.replace("i", "j"))
    except ValueError:
        raise InputFormatError(f"not a number: {raw!r}")


def _catalog_params(args) -> dict:
    return {name: _number(getattr(args, name)) for name in CATALOG_FLAGS if getattr(args, name, None) is not None}


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputFormatError(f"cannot read {path}: {e}")


def load_algebra(args) -> Algebra:
    if args.catalog:
        return catalog.build(args.catalog, **_catalog_params(args))
    if not args.input:
        raise InputFormatError("give an algebra JSON path or --catalog NAME")
    data = _read_json(args.input)
    if "tri" in data:
        return algebra_from_cubic(CubicForm.from_dict(data))
    return Algebra.from_dict(data)


def load_cubic(args) -> CubicForm:
    if args.catalog:
        return catalog.build_cubic(args.catalog, **_catalog_params(args))
    if not args.input:
        raise InputFormatError("give a cubic form JSON path or --catalog NAME")
    return CubicForm.from_dict(_read_json(args.input))


def solve_config(args) -> SolveConfig:
    return SolveConfig().with_overrides(seed=args.seed, track_tol=args.track_tol,
                                        dedup_tol=args.dedup_tol, cluster_tol=args.cluster_tol)


# -------- pipeline ----------
def _metrised_data(A: Algebra, S: IdempotentSet, B: InnerProduct, findings: list[str]) -> dict:
    ok, violation = metrised_check(A, B)
    out = {"passes": ok, "violation": violation, "euclidean": B.euclidean}
    if not ok:
        return out
    # fusion is only a theorem at the extremal idempotent; elsewhere it is reported
    fusion = {}
    for i, r in enumerate(S.idempotents):
        if r.regular:
            continue
        try:
            fusion[i] = fusion_check(A, B, r, S.cluster_tol)
        except HalfNotInSpectrumError as e:
            log.info(f"idempotent {i}: {e}")
    out["fusion"] = fusion
    u = cubic_from_algebra(A, B)
    if not (u.is_real and B.euclidean):
        return out
    ext = extremal_idempotent(u, B=B)
    out["extremal"] = {
        "f_value": ext.value,
        "point": ext.point,
        "spectrum": ext.record.spectrum.multiset(),
        "half_bound_holds": ext.half_bound_holds,
        "one_is_simple": ext.one_is_simple,
    }
    if not ext.half_bound_holds:
        findings.append("extremal idempotent has an eigenvalue above 1/2")
    if ext.record.spectrum.contains(0.5):
        value = fusion_check(A, B, ext.record)
        out["extremal"]["fusion_violation"] = value
        if value > FUSION_TOL:
            findings.append(f"fusion of the 1/2-eigenspace fails ({value:.3e})")
    return out


def analyze(A: Algebra, cfg: SolveConfig, metrised: bool = False, B: InnerProduct | None = None) -> AnalysisReport:
    S = solve_idempotents(A, cfg)
    verdict = classify_genericity(A, S)
    log.info(f"{A.label or 'algebra'}: verdict {verdict.kind} ({verdict.evidence})")
    findings = []
    if verdict.inconsistent:
        findings.append(verdict.evidence)
    report = AnalysisReport(
        label=A.label,
        dim=A.dim,
        idempotents=[record_to_dict(r) for r in S.idempotents],
        nilpotent_directions=_jsonable(S.nilpotent_directions),
        verdict={"kind": verdict.kind, "evidence": verdict.evidence, "inconsistent": verdict.inconsistent},
        algebra_spectrum=_jsonable(algebra_spectrum(S, cfg.cluster_tol)),
        solver=solver_diagnostics(S),
        findings=findings,
    )
    unit = find_unit(A)
    if unit is not None:
        report.unital = {"unit": _jsonable(unit), "pairs": []}
        try:
            index = {id(r): i for i, r in enumerate(S.idempotents)}
            pairs = conjugate_pairs(S, unit, cfg.dedup_tol)
            report.unital["pairs"] = [[index[id(c)], index[id(d)]] for c, d in pairs]
        except UnpairedIdempotentError as e:
            if verdict.generic:
                findings.append(str(e))
    if verdict.generic:
        try:
            syz = syzygy_report(S, unit)
            report.syzygy = _jsonable(syz.to_dict())
            if syz.max_residual > SYZYGY_TOL:
                findings.append(f"syzygy residual {syz.max_residual:.3e} on a generic algebra")
            cs = constant_spectrum_check(S, cfg.cluster_tol)
            report.constant_spectrum = _jsonable(asdict(cs))
            ce = common_eigenvalue_check(S, cfg.cluster_tol)
            report.common_eigenvalues = _jsonable(asdict(ce))
        except TheoryInconsistencyError as e:
            findings.append(str(e))
    if metrised or B is not None:
        B = B or InnerProduct.identity(A.dim)
        report.metrised = _jsonable(_metrised_data(A, S, B, findings))
    for f in findings:
        log.warning(f"inconsistency: {f}")
    return report


# -------- text output ----------
def _fmt(v) -> str:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        re, im = v
        return f"{re:.6g}" if abs(im) < 1e-12 else f"{re:.6g}{im:+.6g}j"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _records_table(records: list[dict]) -> str:
    if not records:
        return "(none)"
    df = pd.DataFrame([{
        "point": _fmt(r["point"]),
        "spectrum": _fmt(r["spectrum"]),
        "regular": r["regular"],
        "mult": r["multiplicity_estimate"],
        "family": r["family_witness"],
    } for r in records])
    return df.to_string()


def report_text(report: AnalysisReport) -> str:
    lines = [f"{report.label or 'algebra'} (dim {report.dim})",
             f"verdict: {report.verdict['kind']} - {report.verdict['evidence']}",
             "", _records_table(report.idempotents), ""]
    if report.nilpotent_directions:
        lines.append("nilpotent directions: " + ", ".join(_fmt(v) for v in report.nilpotent_directions))
    lines.append(pd.Series(report.solver).to_string())
    if report.syzygy:
        residuals = {k: v for k, v in report.syzygy.items() if k not in ("samples", "unital", "derivative_residuals")}
        residuals.update({f"derivative_k{k + 1}": v for k, v in enumerate(report.syzygy["derivative_residuals"])})
        residuals.update(report.syzygy.get("unital") or {})
        lines += ["", pd.Series(residuals, name="residual").to_string()]
    if report.metrised:
        lines += ["", pd.Series({k: _fmt(v) for k, v in report.metrised.items()}, dtype=object).to_string()]
    for f in report.findings:
        lines.append(f"INCONSISTENCY: {f}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -------- commands ----------
def cmd_analyze(args) -> int:
    A = load_algebra(args)
    B = InnerProduct.load(args.inner_product) if args.inner_product else None
    report = analyze(A, solve_config(args), metrised=args.metrised, B=B)
    _emit(_dumps(report.to_dict()) if args.format == "json" else report_text(report), args.out)
    return 2 if report.inconsistent else 0


def cmd_solve(args) -> int:
    A = load_algebra(args)
    S = solve_idempotents(A, solve_config(args))
    data = {"label": A.label, "dim": A.dim,
            "idempotents": [record_to_dict(r) for r in S.idempotents],
            "nilpotent_directions": S.nilpotent_directions,
            "solver": solver_diagnostics(S)}
    if args.format == "json":
        text = _dumps(data)
    else:
        text = _records_table(data["idempotents"]) + "\n" + pd.Series(data["solver"]).to_string() + "\n"
    _emit(text, args.out)
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [{"name": e.name, "params": e.params, "cubic": e.cubic is not None,
                 "expected": {k: {"value": f.value, "source": f.source} for k, f in e.expected.items()}}
                for e in catalog.ENTRIES.values()]
        if args.format == "json":
            text = _dumps(rows)
        else:
            text = pd.DataFrame([{"name": r["name"], "params": _fmt(list(r["params"].items())), "cubic": r["cubic"]}
                                 for r in rows]).to_string() + "\n"
        _emit(text, args.out)
        return 0
    if not args.name:
        raise InputFormatError("catalog build needs an entry name")
    A = catalog.build(args.name, **_catalog_params(args))
    _emit(_dumps(A.to_dict()), args.out)
    return 0


def cmd_extremal(args) -> int:
    u = load_cubic(args)
    ext = extremal_idempotent(u, starts=args.starts, seed=args.seed)
    A = algebra_from_cubic(u)
    data = {
        "label": u.label,
        "f_value": ext.value,
        "idempotent": record_to_dict(ext.record),
        "half_bound_holds": ext.half_bound_holds,
        "one_is_simple": ext.one_is_simple,
        "critical_values": ext.critical_values,
    }
    code = 0 if ext.half_bound_holds else 2
    if ext.record.spectrum.contains(0.5):
        data["fusion_violation"] = fusion_check(A, InnerProduct.identity(A.dim), ext.record)
        if data["fusion_violation"] > FUSION_TOL:
            code = 2
    if args.format == "json":
        text = _dumps(data)
    else:
        text = pd.Series({k: _fmt(_jsonable(v)) for k, v in data.items() if k != "idempotent"},
                         dtype=object).to_string() + "\n" + _records_table([data["idempotent"]]) + "\n"
    _emit(text, args.out)
    return code


# -------- parser ----------
def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--log-level", help=f"logging level (default {config.LOG_LEVEL})")


def _add_catalog_flags(p: argparse.ArgumentParser):
    p.add_argument("--catalog", help="name of a catalog entry instead of an input file")
    for name in CATALOG_FLAGS:
        p.add_argument(f"--{name}", help=f"catalog parameter {name}")


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int)
    p.add_argument("--track-tol", type=float)
    p.add_argument("--dedup-tol", type=float)
    p.add_argument("--cluster-tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="naidem", description="Idempotents, Peirce spectra and syzygies "
                                                                "of commutative nonassociative algebras")
    parser.add_argument("--version", action="version", version=f"naidem {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis of one algebra")
    p.add_argument("input", nargs="?", help="algebra or cubic form JSON")
    _add_catalog_flags(p)
    _add_solver_flags(p)
    p.add_argument("--metrised", action="store_true", help="also check the Euclidean form and search the extremal idempotent")
    p.add_argument("--inner-product", help="JSON matrix of the invariant form; implies the metrised checks")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="idempotents and nilpotents only")
    p.add_argument("input", nargs="?")
    _add_catalog_flags(p)
    _add_solver_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("catalog", help="list or build named algebras")
    p.add_argument("action", choices=("list", "build"))
    p.add_argument("name", nargs="?")
    for name in CATALOG_FLAGS:
        p.add_argument(f"--{name}")
    _add_common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("extremal", help="extremal idempotent of a real cubic form")
    p.add_argument("input", nargs="?", help="cubic form JSON")
    _add_catalog_flags(p)
    p.add_argument("--starts", type=int, default=config.EXTREMAL_STARTS)
    p.add_argument("--seed", type=int, default=config.SEED)
    _add_common(p)
    p.set_defaults(func=cmd_extremal)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(args.log_level or config.LOG_LEVEL).upper(),
                        format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except TheoryInconsistencyError as e:
        log.error(f"inconsistency: {e}")
        return 2
    except NaidemError as e:
        log.error(str(e))
        return 1
