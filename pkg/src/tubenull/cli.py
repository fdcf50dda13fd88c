"""``tubenull`` command line.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
3 the enumeration budget was exceeded.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .core import DEFAULT_BUDGET, BudgetExceeded, CarpetSpec, HomIfsSpec, carpet_to_ifs
from .cover import cover_weight_curve, generate_cover, verify_cover
from .fourier import fourier_scan, r0_certificate
from .measures import BernoulliMeasure, dimension_drop_scan, entropy_dimension_estimate, pushforward_weights
from .projection import Direction, exact_overlap_directions, overlap_multiplicity, primitive_directions, \
    project_ifs, wsc_check
from .render import RenderConfig, box_count, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# --- argument helpers --------------------------------------------------------

def _int_list(text: str) -> list:
    """"4:10" (inclusive) or "4,6,8"."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from exc


def _vector(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer vector {text!r}") from exc


def _weights(text: str) -> BernoulliMeasure:
    parts = [x.strip() for x in text.split(",") if x.strip()]
    try:
        if any(c in x for x in parts for c in ".eE"):
            return BernoulliMeasure(tuple(float(x) for x in parts))
        return BernoulliMeasure(tuple(Fraction(x) for x in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load(args):
    system, mu = io.system_from_json(io.read(args.spec))
    if getattr(args, "weights", None) is not None:
        mu = args.weights
    return system, mu


def _carpet(args) -> tuple:
    system, mu = _load(args)
    if not isinstance(system, CarpetSpec):
        raise UsageError("this command needs a carpet.v1 spec")
    if mu is None:
        mu = BernoulliMeasure.uniform(system.size)
    if mu.size != system.size:
        raise UsageError(f"{mu.size} weights for {system.size} digits")
    return system, mu


def _ifs(args) -> HomIfsSpec:
    system, _ = _load(args)
    return carpet_to_ifs(system) if isinstance(system, CarpetSpec) else system


def _emit(args, doc: dict) -> None:
    text = io.dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------

def cmd_carpet_render(args) -> int:
    system, _ = _load(args)
    if not args.out:
        raise UsageError("--out is required for render")
    overlay = io.cover_from_json(io.read(args.cover)) if args.cover else None
    render(system, RenderConfig(args.resolution, args.depth, args.out, overlay), budget=args.budget)
    return EXIT_OK


def cmd_overlap_dirs(args) -> int:
    ifs = _ifs(args)
    entries = []
    for pair, v in exact_overlap_directions(ifs):
        entries.append((pair, v, overlap_multiplicity(project_ifs(ifs, v), R0=args.R)))
    _emit(args, io.overlap_to_json(entries))
    return EXIT_OK


def cmd_wsc_check(args) -> int:
    spec, _ = _carpet(args)
    ifs = carpet_to_ifs(spec)
    if args.v:
        dirs = [Direction.of(v) for v in args.v]
    else:
        dirs = primitive_directions(spec.dim, args.R, norm="sup")
    reports = [wsc_check(ifs, v, args.depth, budget=args.budget) for v in dirs]
    _emit(args, io.wsc_to_json(reports))
    ok = all(r.integral and r.scaled_min_gap >= 1 for r in reports)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fourier_scan(args) -> int:
    spec, mu = _carpet(args)
    _emit(args, io.fourier_scan_to_json(fourier_scan(spec, mu, args.R, args.tol), args.R, args.tol))
    return EXIT_OK


def cmd_fourier_r0(args) -> int:
    spec, _ = _carpet(args)
    cert = r0_certificate(spec)
    _emit(args, io.r0_to_json(cert))
    return EXIT_OK if cert.tail_sum_bound < 1 and cert.R0 <= cert.tent_bound else EXIT_FAIL


def cmd_entropy_project(args) -> int:
    system, mu = _load(args)
    ifs = carpet_to_ifs(system) if isinstance(system, CarpetSpec) else system
    if mu is None:
        mu = BernoulliMeasure.uniform(ifs.size)
    if mu.size != ifs.size:
        raise UsageError(f"{mu.size} weights for {ifs.size} maps")
    if args.v is None or len(args.v) != 1:
        raise UsageError("entropy project needs exactly one --v")
    pifs = project_ifs(ifs, args.v[0])
    rep = entropy_dimension_estimate(pifs, pushforward_weights(mu, pifs.classes), args.n_range, budget=args.budget)
    _emit(args, io.entropy_to_json(rep))
    if args.csv:
        Path(args.csv).write_text(io.entropy_to_csv(rep))
    return EXIT_OK


def cmd_entropy_scan(args) -> int:
    spec, mu = _carpet(args)
    _emit(args, io.drop_scan_to_json(dimension_drop_scan(spec, mu, args.R, args.n_range, budget=args.budget)))
    return EXIT_OK


def cmd_cover_generate(args) -> int:
    cov = generate_cover(_ifs(args), args.depth, args.s, budget=args.budget, threshold=args.threshold)
    _emit(args, io.cover_to_json(cov))
    return EXIT_OK


def cmd_cover_verify(args) -> int:
    cov = io.cover_from_json(io.read(args.cover))
    rep = verify_cover(_ifs(args), cov, args.depth, budget=args.budget)
    _emit(args, io.verify_to_json(rep))
    if not rep.passed:
        print(f"uncovered word: {list(rep.witness)} ({rep.failures} failures)", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_cover_curve(args) -> int:
    curve = cover_weight_curve(_ifs(args), args.s, args.n_range, budget=args.budget)
    _emit(args, io.curve_to_json(curve))
    return EXIT_OK


def cmd_boxcount(args) -> int:
    spec, _ = _carpet(args)
    if args.v:
        target = project_ifs(carpet_to_ifs(spec), args.v[0])
    else:
        target = spec
    _emit(args, io.boxcount_to_json(box_count(target, args.n_range, budget=args.budget)))
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def _common(p, spec=True):
    if spec:
        p.add_argument("--spec", required=True, help="carpet.v1 or ifs.v1 JSON file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum words or states enumerated")
    p.add_argument("--out", help="output file (default: stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tubenull", description="Tube covers, projections and entropy of carpets.")
    top = ap.add_subparsers(dest="group", required=True)

    carpet = top.add_parser("carpet", help="carpet drawings").add_subparsers(dest="cmd", required=True)
    p = _common(carpet.add_parser("render", help="PNG or SVG of depth-n cylinders"))
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--resolution", type=int, default=729, help="pixels per unit length")
    p.add_argument("--cover", help="cover.v1 file drawn as a slab overlay")
    p.set_defaults(func=cmd_carpet_render)

    ifs = top.add_parser("ifs", help="IFS diagnostics").add_subparsers(dest="cmd", required=True)
    p = _common(ifs.add_parser("overlap-dirs", help="exact-overlap direction of every pair"))
    p.add_argument("--R", type=int, default=None, help="R0 used in the multiplicity bound")
    p.set_defaults(func=cmd_overlap_dirs)

    wsc = top.add_parser("wsc", help="weak separation").add_subparsers(dest="cmd", required=True)
    p = _common(wsc.add_parser("check", help="certify integral offsets with gap >= 1"))
    p.add_argument("--v", type=_vector, action="append", help="direction such as 1,1 (repeatable)")
    p.add_argument("--R", type=int, default=3, help="all primitive v with sup-norm <= R when --v is absent")
    p.add_argument("--depth", type=int, default=5)
    p.set_defaults(func=cmd_wsc_check)

    four = top.add_parser("fourier", help="Fourier coefficients").add_subparsers(dest="cmd", required=True)
    p = _common(four.add_parser("scan", help="coefficients at primitive v with |v| <= R"))
    p.add_argument("--R", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--weights", type=_weights)
    p.set_defaults(func=cmd_fourier_scan)
    p = _common(four.add_parser("r0", help="tent-function R0 certificate"))
    p.set_defaults(func=cmd_fourier_r0)

    ent = top.add_parser("entropy", help="projected entropy").add_subparsers(dest="cmd", required=True)
    p = _common(ent.add_parser("project", help="entropy table along one direction"))
    p.add_argument("--v", type=_vector, action="append")
    p.add_argument("--n-range", type=_int_list, default=list(range(1, 13)))
    p.add_argument("--weights", type=_weights)
    p.add_argument("--csv", help="also write the table as CSV")
    p.set_defaults(func=cmd_entropy_project)
    p = _common(ent.add_parser("scan", help="direction with the largest dimension drop"))
    p.add_argument("--R", type=int, default=1)
    p.add_argument("--n-range", type=_int_list, default=[4, 8, 12])
    p.add_argument("--weights", type=_weights)
    p.set_defaults(func=cmd_entropy_scan)

    cov = top.add_parser("cover", help="slab covers").add_subparsers(dest="cmd", required=True)
    p = _common(cov.add_parser("generate", help="frequency cover at depth n"))
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--threshold", type=int, default=None, help="override ceil(2n/m)")
    p.set_defaults(func=cmd_cover_generate)
    p = _common(cov.add_parser("verify", help="exhaustive containment check"))
    p.add_argument("--cover", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_cover_verify)
    p = _common(cov.add_parser("curve", help="total weight against depth"))
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n-range", type=_int_list, required=True)
    p.set_defaults(func=cmd_cover_curve)

    p = _common(top.add_parser("boxcount", help="dyadic box counts of K or a projection"))
    p.add_argument("--n-range", type=_int_list, default=list(range(4, 11)))
    p.add_argument("--v", type=_vector, action="append", help="count the projection along v instead")
    p.set_defaults(func=cmd_boxcount)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
