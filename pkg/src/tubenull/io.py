"""Versioned JSON report formats.

Every document carries a ``schema`` key such as ``"cover.v1"``. Rationals are
written as ``"p/q"`` strings, floats with Python's shortest round-trip repr,
and keys are sorted, so identical objects serialise to identical bytes.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from fractions import Fraction
from pathlib import Path

from .core import CarpetSpec, HoleReport, HomIfsSpec, as_fraction
from .cover import CurveRow, Slab, TubeCover, VerifyReport, WeightCurve
from .fourier import FourierValue, R0Certificate
from .measures import BernoulliMeasure, DropScanResult, EntropyReport, EntropyRow
from .projection import Direction, OverlapReport, WscReport
from .render import BoxCountReport


class SchemaError(ValueError):
    """A document does not match the expected schema."""


def _q(x) -> str:
    return str(Fraction(x))


def _num(x):
    """Float for JSON; infinities and NaN become strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _unnum(x) -> float:
    return float(x)


def _gap(x):
    return "inf" if x is math.inf or x == math.inf else _q(x)


def _ungap(x):
    return math.inf if x == "inf" else Fraction(x)


def _weights_out(w) -> list:
    return [_q(x) if isinstance(x, Fraction) else _num(x) for x in w]


def _weights_in(ws) -> tuple:
    return tuple(Fraction(x) if isinstance(x, str) else float(x) for x in ws)


def _expect(doc: dict, schema: str):
    if not isinstance(doc, dict) or doc.get("schema") != schema:
        raise SchemaError(f"expected a {schema} document, got {doc.get('schema') if isinstance(doc, dict) else doc!r}")


# --- systems -----------------------------------------------------------------

def carpet_to_json(spec: CarpetSpec, weights=None) -> dict:
    doc = {"schema": "carpet.v1", "base": spec.base, "dim": spec.dim, "digits": [list(d) for d in spec.digits]}
    if spec.size == spec.base**spec.dim:
        doc["allow_full"] = True
    if weights is not None:
        doc["weights"] = _weights_out(weights)
    return doc


def carpet_from_json(doc: dict) -> CarpetSpec:
    _expect(doc, "carpet.v1")
    return CarpetSpec(int(doc["base"]), int(doc["dim"]), tuple(tuple(d) for d in doc["digits"]),
                      require_proper=not doc.get("allow_full", False))


def ifs_to_json(ifs: HomIfsSpec, weights=None) -> dict:
    doc = {"schema": "ifs.v1", "ratio": _q(ifs.ratio), "translations": [[_q(c) for c in t] for t in ifs.translations]}
    if weights is not None:
        doc["weights"] = _weights_out(weights)
    return doc


def ifs_from_json(doc: dict) -> HomIfsSpec:
    _expect(doc, "ifs.v1")
    return HomIfsSpec(as_fraction(doc["ratio"]), tuple(tuple(as_fraction(c) for c in t) for t in doc["translations"]))


def system_from_json(doc: dict):
    """(system, BernoulliMeasure or None) from a carpet.v1 or ifs.v1 document."""
    schema = doc.get("schema") if isinstance(doc, dict) else None
    if schema == "carpet.v1":
        system = carpet_from_json(doc)
    elif schema == "ifs.v1":
        system = ifs_from_json(doc)
    else:
        raise SchemaError(f"expected carpet.v1 or ifs.v1, got {schema!r}")
    mu = BernoulliMeasure(_weights_in(doc["weights"])) if "weights" in doc else None
    return system, mu


# --- reports -----------------------------------------------------------------

def _dir(v: Direction) -> list:
    return list(v.v)


def wsc_to_json(reports) -> dict:
    return {"schema": "wsc_report.v1", "reports": [{
        "direction": _dir(r.direction), "checked_depth": r.checked_depth, "integral": r.integral,
        "scaled_min_gap": _gap(r.scaled_min_gap), "wsc_constant_c": _gap(r.wsc_constant_c),
        "distinct_counts": list(r.distinct_counts), "gaps": [_gap(g) for g in r.gaps],
    } for r in reports]}


def wsc_from_json(doc: dict) -> list:
    _expect(doc, "wsc_report.v1")
    return [WscReport(Direction(tuple(r["direction"])), r["checked_depth"], _ungap(r["scaled_min_gap"]),
                      r["integral"], _ungap(r["wsc_constant_c"]), tuple(r["distinct_counts"]),
                      tuple(_ungap(g) for g in r["gaps"])) for r in doc["reports"]]


def overlap_to_json(entries) -> dict:
    """entries: list of ((i, j), Direction, OverlapReport)."""
    return {"schema": "overlap_report.v1", "entries": [{
        "pair": list(pair), "direction": _dir(v), "multiplicity": rep.multiplicity, "R0": rep.R0,
        "dim": rep.dim, "bound_2sqrtd_R0": _num(rep.bound_2sqrtd_R0), "within_bound": rep.within_bound,
    } for pair, v, rep in entries]}


def overlap_from_json(doc: dict) -> list:
    _expect(doc, "overlap_report.v1")
    return [(tuple(e["pair"]), Direction(tuple(e["direction"])),
             OverlapReport(e["multiplicity"], e["R0"], e["dim"], _unnum(e["bound_2sqrtd_R0"]), e["within_bound"]))
            for e in doc["entries"]]


def _entropy_body(rep: EntropyReport) -> dict:
    return {
        "direction": None if rep.direction is None else _dir(rep.direction), "ratio": _q(rep.ratio),
        "weights": _weights_out(rep.weights),
        "rows": [{"n": r.n, "h": r.h, "H_n": _num(r.H_n), "radius": _num(r.radius), "ratio": _num(r.ratio),
                  "garsia_gap": _num(r.garsia_gap)} for r in rep.rows],
        "dim_lower": _num(rep.dim_lower), "dim_upper": _num(rep.dim_upper),
        "dim_estimate": _num(rep.dim_estimate), "overlap_M": rep.overlap_M,
    }


def _entropy_from_body(d: dict) -> EntropyReport:
    rows = tuple(EntropyRow(r["n"], r["h"], _unnum(r["H_n"]), _unnum(r["radius"]), _unnum(r["ratio"]),
                            _unnum(r["garsia_gap"])) for r in d["rows"])
    v = None if d["direction"] is None else Direction(tuple(d["direction"]))
    return EntropyReport(v, Fraction(d["ratio"]), _weights_in(d["weights"]), rows, _unnum(d["dim_lower"]),
                         _unnum(d["dim_upper"]), _unnum(d["dim_estimate"]), d["overlap_M"])


def entropy_to_json(rep: EntropyReport) -> dict:
    return {"schema": "entropy_report.v1", **_entropy_body(rep)}


def entropy_from_json(doc: dict) -> EntropyReport:
    _expect(doc, "entropy_report.v1")
    return _entropy_from_body(doc)


def entropy_to_csv(rep: EntropyReport) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "h", "H_n", "radius", "ratio", "garsia_gap"])
    for r in rep.rows:
        w.writerow([r.n, r.h, repr(r.H_n), repr(r.radius), repr(r.ratio), repr(r.garsia_gap)])
    return buf.getvalue()


def drop_scan_to_json(res: DropScanResult) -> dict:
    return {"schema": "drop_scan.v1", "direction": _dir(res.direction), "dim_upper": _num(res.dim_upper),
            "drop": _num(res.drop), "reports": [_entropy_body(rep) for _, rep in res.reports]}


def drop_scan_from_json(doc: dict) -> DropScanResult:
    _expect(doc, "drop_scan.v1")
    reps = tuple((Direction(tuple(d["direction"])), _entropy_from_body(d)) for d in doc["reports"])
    return DropScanResult(Direction(tuple(doc["direction"])), _unnum(doc["dim_upper"]), _unnum(doc["drop"]), reps)


def fourier_scan_to_json(values, R: int, tol: float) -> dict:
    return {"schema": "fourier_scan.v1", "R": R, "tol": _num(tol), "entries": [{
        "v": list(fv.xi), "re": _num(fv.value.real), "im": _num(fv.value.imag), "abs": _num(abs(fv.value)),
        "tail": _num(fv.tail_radius), "terms": fv.terms_used,
    } for fv in values]}


def fourier_scan_from_json(doc: dict) -> list:
    _expect(doc, "fourier_scan.v1")
    return [FourierValue(tuple(e["v"]), complex(_unnum(e["re"]), _unnum(e["im"])), _unnum(e["tail"]), e["terms"])
            for e in doc["entries"]]


def r0_to_json(cert: R0Certificate) -> dict:
    h = cert.hole
    return {"schema": "r0_certificate.v1", "R0": cert.R0, "N_eff": cert.N_eff, "dim": cert.dim,
            "tail_sum_bound": _num(cert.tail_sum_bound), "tent_bound": cert.tent_bound, "method": cert.method,
            "hole": {"depth": h.depth, "cube_index": list(h.cube_index), "alpha_lower": _q(h.alpha_lower)}}


def r0_from_json(doc: dict) -> R0Certificate:
    _expect(doc, "r0_certificate.v1")
    h = doc["hole"]
    hole = HoleReport(h["depth"], tuple(h["cube_index"]), Fraction(h["alpha_lower"]))
    return R0Certificate(doc["R0"], hole, doc["N_eff"], doc["dim"], _unnum(doc["tail_sum_bound"]),
                         doc["tent_bound"], doc["method"])


def cover_to_json(cover: TubeCover) -> dict:
    return {
        "schema": "cover.v1", "depth": cover.depth, "s": _num(cover.s), "threshold": cover.threshold,
        "total_weight": _num(cover.total_weight),
        "pair_assignment": [{"pair": list(p), "direction": _dir(v)} for p, v in cover.pair_assignment],
        "slabs": [{"direction": _dir(sl.direction), "a": _q(sl.a), "b": _q(sl.b), "width": _num(sl.width)}
                  for sl in cover.slabs],
    }


def cover_from_json(doc: dict) -> TubeCover:
    _expect(doc, "cover.v1")
    slabs = tuple(Slab(Direction(tuple(s["direction"])), Fraction(s["a"]), Fraction(s["b"])) for s in doc["slabs"])
    assign = tuple((tuple(e["pair"]), Direction(tuple(e["direction"]))) for e in doc["pair_assignment"])
    return TubeCover(doc["depth"], _unnum(doc["s"]), slabs, assign, doc["threshold"], _unnum(doc["total_weight"]))


def verify_to_json(rep: VerifyReport) -> dict:
    return {"schema": "verify.v1", "passed": rep.passed, "depth": rep.depth, "words_checked": rep.words_checked,
            "failures": rep.failures, "witness": None if rep.witness is None else list(rep.witness)}


def verify_from_json(doc: dict) -> VerifyReport:
    _expect(doc, "verify.v1")
    w = doc["witness"]
    return VerifyReport(doc["passed"], doc["depth"], doc["words_checked"], doc["failures"],
                        None if w is None else tuple(w))


def curve_to_json(curve: WeightCurve) -> dict:
    return {"schema": "cover_curve.v1", "s": _num(curve.s), "reference_exponent": _num(curve.reference_exponent),
            "rows": [{"n": r.n, "slabs": r.slabs, "total_weight": _num(r.total_weight)} for r in curve.rows]}


def curve_from_json(doc: dict) -> WeightCurve:
    _expect(doc, "cover_curve.v1")
    rows = tuple(CurveRow(r["n"], r["slabs"], _unnum(r["total_weight"])) for r in doc["rows"])
    return WeightCurve(_unnum(doc["s"]), _unnum(doc["reference_exponent"]), rows)


def boxcount_to_json(rep: BoxCountReport) -> dict:
    return {"schema": "boxcount.v1", "target": rep.target, "rows": [{"n": n, "count": c} for n, c in rep.rows],
            "slope": _num(rep.slope), "intercept": _num(rep.intercept), "method": rep.method}


def boxcount_from_json(doc: dict) -> BoxCountReport:
    _expect(doc, "boxcount.v1")
    return BoxCountReport(doc["target"], tuple((r["n"], r["count"]) for r in doc["rows"]),
                          _unnum(doc["slope"]), _unnum(doc["intercept"]), doc["method"])


# --- files -------------------------------------------------------------------

def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc))


def read(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


__all__ = [
    "SchemaError", "carpet_to_json", "carpet_from_json", "ifs_to_json", "ifs_from_json", "system_from_json",
    "wsc_to_json", "wsc_from_json", "overlap_to_json", "overlap_from_json", "entropy_to_json",
    "entropy_from_json", "entropy_to_csv", "drop_scan_to_json", "drop_scan_from_json", "fourier_scan_to_json",
    "fourier_scan_from_json", "r0_to_json", "r0_from_json", "cover_to_json", "cover_from_json",
    "verify_to_json", "verify_from_json", "curve_to_json", "curve_from_json", "boxcount_to_json",
    "boxcount_from_json", "dumps", "write", "read",
]
