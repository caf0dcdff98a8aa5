"""Command line interface.

Every subcommand reads JSON documents (files or "-" for stdin), writes
a JSON result to stdout, and exits 0 on success, 1 on usage or parse
errors, 2 on a property or regression failure (verify-paper mismatch,
classify rejection).  --pretty switches to an indented human-oriented
rendering of the same data.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import coefficients, documents, dynamics, products, registry
from .documents import DocumentError, dump_document
from .heights import evaluate, height_wrt, multidegree_matrix
from .lattice import DivisorClass, PicardLattice
from .scalars import format_scalar

USAGE_ERROR = 1
PROPERTY_FAILURE = 2


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _emit(obj: dict, pretty: bool) -> None:
    print(dump_document(obj, pretty=pretty))


def _scalar_str(result: coefficients.CoefficientResult) -> str | float:
    if result.exact:
        return format_scalar(result.value)
    return float(result.value)


def _load_case(args) -> tuple:
    lattice = documents.parse_lattice(_read(args.lattice))
    pullback = documents.parse_pullback(_read(args.pullback))
    divisor = documents.parse_divisor(_read(args.divisor))
    return lattice, pullback, divisor


def cmd_mu(args) -> int:
    lattice, pullback, divisor = _load_case(args)
    r1 = coefficients.mu1(pullback, divisor, lattice, method=args.method)
    r2 = coefficients.mu2(pullback, divisor, lattice, method=args.method)
    _emit({
        "mu1": _scalar_str(r1),
        "mu2": _scalar_str(r2),
        "mu1_float": r1.as_float(),
        "mu2_float": r2.as_float(),
        "exact": r1.exact and r2.exact,
        "method": r1.method,
    }, args.pretty)
    return 0


def cmd_heights(args) -> int:
    signature, points = documents.parse_points(_read(args.points))
    if args.divisor is not None:
        divisor = documents.parse_divisor(_read(args.divisor))
    else:
        divisor = DivisorClass.of([1] * len(signature))
    rows = []
    for P in points:
        if P.signature != tuple(signature):
            raise CliError(f"point {P} does not match the signature")
        rows.append({
            "point": documents.point_to_obj(P),
            "height": height_wrt(divisor, P),
        })
    _emit({"heights": rows}, args.pretty)
    return 0


def cmd_eval(args) -> int:
    f = documents.parse_morphism(_read(args.morphism))
    _, points = documents.parse_points(_read(args.points))
    images = []
    for P in points:
        image = evaluate(f, P)
        images.append({
            "point": documents.point_to_obj(P),
            "image": documents.point_to_obj(image),
        })
    _emit({"images": images}, args.pretty)
    return 0


def cmd_orbit(args) -> int:
    f = documents.parse_morphism(_read(args.morphism))
    _, points = documents.parse_points(_read(args.point))
    if len(points) != 1:
        raise CliError("orbit expects exactly one point")
    ceiling = args.ceiling if args.ceiling is not None else math.inf
    record = dynamics.orbit(f, points[0], max_iter=args.max_iter, ceiling=ceiling)
    _emit({
        "status": record.status,
        "tail": record.tail,
        "period": record.period,
        "escaped_at": record.escaped_at,
        "points": [documents.point_to_obj(P) for P in record.points],
        "heights": record.heights,
    }, args.pretty)
    return 0


def cmd_preperiodic(args) -> int:
    f = documents.parse_morphism(_read(args.morphism))
    result = dynamics.find_preperiodic(f, args.height_bound,
                                       max_iter=args.max_iter,
                                       ceiling=args.ceiling)
    _emit({
        "preperiodic": [documents.point_to_obj(P) for P in result.preperiodic],
        "undetermined": [documents.point_to_obj(P) for P in result.undetermined],
        "count": len(result.preperiodic),
        "max_height": result.max_height,
    }, args.pretty)
    return 0


def cmd_northcott(args) -> int:
    f = documents.parse_morphism(_read(args.morphism))
    divisor = documents.parse_divisor(_read(args.divisor))
    report = dynamics.verify_weak_northcott(
        f, divisor, mu1=args.mu1, mu2=args.mu2,
        epsilon=args.epsilon, H=args.height_bound)
    _emit({
        "epsilon": report.epsilon,
        "mu1": report.mu1,
        "mu2": report.mu2,
        "c1_emp": report.c1_emp,
        "c2_emp": report.c2_emp,
        "sample_size": report.sample_size,
        "height_bound": report.height_bound,
        "bucket_maxima": {str(k): list(v)
                          for k, v in sorted(report.bucket_maxima.items())},
        "argmax_expand": documents.point_to_obj(report.argmax_expand)
        if report.argmax_expand else None,
        "argmax_contract": documents.point_to_obj(report.argmax_contract)
        if report.argmax_contract else None,
    }, args.pretty)
    return 0


def cmd_silverman(args) -> int:
    f = documents.parse_morphism(_read(args.morphism))
    divisor = documents.parse_divisor(_read(args.divisor))
    estimate = dynamics.estimate_silverman_mu(
        f, divisor, H=args.height_bound, h_min=args.h_min)
    _emit({
        "estimate": estimate,
        "height_bound": args.height_bound,
        "h_min": args.h_min,
    }, args.pretty)
    return 0


def cmd_classify(args) -> int:
    if args.morphism is not None:
        f = documents.parse_morphism(_read(args.morphism))
        rows, _ = multidegree_matrix(f)
        dims = list(f.signature)
        matrix = [list(r) for r in rows]
    else:
        obj = documents._as_obj(_read(args.matrix))
        if not isinstance(obj, dict) or "matrix" not in obj or "dims" not in obj:
            raise CliError('matrix document needs keys "matrix" and "dims"')
        matrix = obj["matrix"]
        dims = obj["dims"]
    order = sorted(range(len(dims)), key=lambda i: dims[i])
    sorted_dims = [dims[i] for i in order]
    sorted_matrix = [[matrix[u][v] for v in order] for u in order]
    try:
        structure = products.classify_dominant(sorted_matrix, sorted_dims)
    except products.ClassificationError as exc:
        _emit({"ok": False, "reason": str(exc)}, args.pretty)
        return PROPERTY_FAILURE
    except coefficients.NotDominantError as exc:
        _emit({"ok": False, "reason": str(exc)}, args.pretty)
        return PROPERTY_FAILURE
    lattice = PicardLattice.orthant(len(sorted_dims))
    ones = DivisorClass.of([1] * len(sorted_dims))
    power = products.power_coefficients(structure, sorted_matrix, ones, lattice)
    _emit({
        "ok": True,
        "dims": list(structure.dims),
        "input_order": order,
        "blocks": [list(b) for b in structure.blocks],
        "sigma": list(structure.sigma),
        "degrees": list(structure.degrees),
        "power": power.power,
        "power_matrix": [list(r) for r in power.matrix],
        "mu1": power.mu1,
        "mu2": power.mu2,
    }, args.pretty)
    return 0


def cmd_verify_paper(args) -> int:
    report = registry.run_paper_examples()
    payload = {
        "passed": report.passed,
        "cases": [
            {
                "name": c.name,
                "passed": c.passed,
                "expected_mu1": format_scalar(c.expected_mu1),
                "expected_mu2": format_scalar(c.expected_mu2),
                "computed_mu1": _scalar_str(c.computed_mu1),
                "computed_mu2": _scalar_str(c.computed_mu2),
                "bisect_error": c.bisect_error,
                "detail": c.detail,
            }
            for c in report.cases
        ],
    }
    _emit(payload, args.pretty)
    return 0 if report.passed else PROPERTY_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heightdyn",
        description="height coefficients and dynamics on products of "
                    "projective spaces")
    parser.add_argument("--pretty", action="store_true",
                        help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mu", help="mu1/mu2 of a pullback for an ample divisor")
    p.add_argument("--lattice", required=True)
    p.add_argument("--pullback", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "closed_form", "bisection"])
    p.set_defaults(handler=cmd_mu)

    p = sub.add_parser("heights", help="weighted heights of points")
    p.add_argument("--points", required=True)
    p.add_argument("--divisor")
    p.set_defaults(handler=cmd_heights)

    p = sub.add_parser("eval", help="evaluate a morphism on points")
    p.add_argument("--morphism", required=True)
    p.add_argument("--points", required=True)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("orbit", help="iterate a point until repeat or escape")
    p.add_argument("--morphism", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--max-iter", type=int, default=64)
    p.add_argument("--ceiling", type=float, default=None)
    p.set_defaults(handler=cmd_orbit)

    p = sub.add_parser("preperiodic", help="search preperiodic points up to a bound")
    p.add_argument("--morphism", required=True)
    p.add_argument("--height-bound", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=64)
    p.add_argument("--ceiling", type=float, default=None)
    p.set_defaults(handler=cmd_preperiodic)

    p = sub.add_parser("northcott",
                       help="empirical constants for the two-sided comparison")
    p.add_argument("--morphism", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--height-bound", type=int, required=True)
    p.set_defaults(handler=cmd_northcott)

    p = sub.add_parser("silverman", help="minimum height ratio over a sample")
    p.add_argument("--morphism", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--height-bound", type=int, required=True)
    p.add_argument("--h-min", type=float, required=True)
    p.set_defaults(handler=cmd_silverman)

    p = sub.add_parser("classify",
                       help="block structure of a dominant product endomorphism")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--morphism")
    group.add_argument("--matrix")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify-paper", help="recompute the registry examples")
    p.add_argument("--json", action="store_true",
                   help="JSON output (the default; kept for scripting)")
    p.set_defaults(handler=cmd_verify_paper)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the usage code
        return USAGE_ERROR if exc.code else 0
    try:
        return args.handler(args)
    except (CliError, DocumentError, ValueError) as exc:
        print(dump_document({"error": str(exc)}), file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
