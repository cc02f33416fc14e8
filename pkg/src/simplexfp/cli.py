"""Command-line surface: solve, fixpoint, count-full, triangulate,
verify-label, parse-check.

Every success path prints a schema-versioned JSON document; every error
class has its own exit code so scripts can branch on failures:

    0 success          3 map parse error      4 map range error
    5 refinement budget exhausted             6 resource cap exceeded
    7 label validation failed                 9 internal invariant failure
"""

import argparse
import json
import os
import re
import sys

from . import __version__, kernels, serialize
from .errors import (
    EmptyComponentList,
    InternalError,
    MapRangeError,
    MapSyntaxError,
    RefinementExhausted,
    ResourceCapExceeded,
    SimplexError,
    UnknownBuiltin,
)
from .geometry import basis
from .labeling import (
    MapInducedLabeling,
    count_full_cells,
    random_carrier_labeling,
    truncate_map,
    validate_sperner,
)
from .mapdsl import builtin, load_map_file, parse_map
from .solver import LipschitzModulus, SolveConfig, epsilon_fixed_point, fixed_point
from .triangulation import KuhnTriangulation, barycentric_subdivide, trivial_triangulation

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_RANGE = 4
EXIT_REFINEMENT = 5
EXIT_RESOURCE = 6
EXIT_VALIDATION = 7
EXIT_INTERNAL = 9


def resolve_map(source):
    """Oracle from a builtin name (identity, shift, rotation-N,
    constant-eI) or a map definition file path."""
    if os.path.exists(source):
        return load_map_file(source)
    if source == "identity":
        return builtin("identity")
    if source == "shift":
        return builtin("shift")
    m = re.fullmatch(r"rotation-([0-9]+)", source)
    if m:
        return builtin("rotation", n=int(m.group(1)))
    m = re.fullmatch(r"constant-e([0-9]+)", source)
    if m:
        return builtin("constant", point=basis(int(m.group(1))))
    raise UnknownBuiltin(
        f"{source!r} is neither an existing map file nor a builtin name "
        f"(identity, shift, rotation-N, constant-eI)")


def _emit(payload, output):
    text = serialize.dumps(payload) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solve_config(args):
    modulus = LipschitzModulus(args.lipschitz) if args.lipschitz else None
    return SolveConfig(
        start_resolution=args.start_resolution,
        max_refinements=args.max_refinements,
        modulus=modulus,
        max_cells=args.max_cells,
        force_python=args.pure_python,
    )


def cmd_solve(args):
    f = resolve_map(args.map)
    cert = epsilon_fixed_point(f, args.epsilon, _solve_config(args))
    _emit(serialize.certificate_payload(cert, __version__), args.output)
    return EXIT_OK


def cmd_fixpoint(args):
    f = resolve_map(args.map)
    cert = fixed_point(f, args.tol, _solve_config(args))
    _emit(serialize.certificate_payload(cert, __version__), args.output)
    return EXIT_OK


def _labelled_triangulation(args):
    t = KuhnTriangulation(args.dim, args.resolution, max_cells=args.max_cells)
    if args.map:
        f = resolve_map(args.map)
        lab = MapInducedLabeling(t, truncate_map(f, args.dim))
    else:
        lab = random_carrier_labeling(t, args.seed)
    return t, lab


def cmd_count_full(args):
    if args.pure_python:
        kernels.force_python(True)
    t, lab = _labelled_triangulation(args)
    count = count_full_cells(t, lab, max_cells=args.max_cells)
    if count % 2 == 0:
        raise InternalError(f"full-cell count {count} is even; labelling invalid?")
    payload = {
        "schema_version": serialize.SCHEMA_VERSION,
        "dim": args.dim,
        "resolution": args.resolution,
        "labelling": args.map if args.map else f"seed:{args.seed}",
        "full_cells": count,
        "odd": True,
    }
    _emit(payload, args.output)
    return EXIT_OK


def cmd_triangulate(args):
    if args.scheme == "kuhn":
        lab = None
        t = KuhnTriangulation(args.dim, args.resolution, max_cells=args.max_cells)
        if args.map:
            f = resolve_map(args.map)
            lab = MapInducedLabeling(t, truncate_map(f, args.dim))
        elif args.seed is not None:
            lab = random_carrier_labeling(t, args.seed)
    else:
        t = trivial_triangulation(args.dim)
        for _ in range(args.depth):
            t = barycentric_subdivide(t, max_cells=args.max_cells)
        lab = random_carrier_labeling(t, args.seed) if args.seed is not None else None
    _emit(serialize.triangulation_payload(t, lab), args.output)
    return EXIT_OK


def cmd_verify_label(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            print(f"simplexfp: label dump is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        t, lab = serialize.labeling_from_payload(payload)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"simplexfp: label dump is malformed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    report = validate_sperner(t, lab)
    out = {
        "schema_version": serialize.SCHEMA_VERSION,
        "valid": report.ok,
    }
    if not report.ok:
        ref, label, carrier = report.violation
        out["violation"] = {
            "vertex": list(ref) if isinstance(ref, tuple) else ref,
            "label": label,
            "carrier": list(carrier),
        }
    _emit(out, args.output)
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_parse_check(args):
    with open(args.map, "r", encoding="utf-8") as fh:
        source = fh.read()
    spec = parse_map(source)
    payload = {
        "schema_version": serialize.SCHEMA_VERSION,
        "valid": True,
        "components": len(spec.components),
        "tail": "zeros" if spec.support_bound is not None else "shift",
        "post_project": spec.project,
    }
    _emit(payload, args.output)
    return EXIT_OK


def _add_common(p):
    p.add_argument("--output", help="write the JSON document here instead of stdout")
    p.add_argument("--max-cells", type=int, default=None,
                   help="resource cap on cells visited or enumerated")


def _add_solver_flags(p):
    p.add_argument("--map", required=True, help="builtin name or map file path")
    p.add_argument("--start-resolution", type=int, default=16,
                   help="initial Kuhn grid resolution (rounded up to a power of two)")
    p.add_argument("--max-refinements", type=int, default=None,
                   help="resolution doublings allowed (default 20)")
    p.add_argument("--lipschitz", type=float, default=None,
                   help="Lipschitz constant of the map in the product metric; "
                        "enables the a-priori mesh from the truncation argument")
    p.add_argument("--pure-python", action="store_true",
                   help="skip the compiled kernel")
    _add_common(p)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simplexfp",
        description="Certified epsilon-fixed points on the infinite-dimensional "
                    "simplex via Sperner labellings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute one epsilon-fixed point certificate")
    _add_solver_flags(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("fixpoint", help="refinement ladder down to a residual tolerance")
    _add_solver_flags(p)
    p.add_argument("--tol", type=float, required=True)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("count-full", help="exhaustively count fully labelled cells")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--map", default=None, help="builtin name or map file path")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for a random carrier-respecting labelling")
    p.add_argument("--pure-python", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_count_full)

    p = sub.add_parser("triangulate", help="export vertices, cells and labels")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--resolution", type=int, default=1)
    p.add_argument("--scheme", choices=("kuhn", "barycentric"), default="kuhn")
    p.add_argument("--depth", type=int, default=1,
                   help="barycentric subdivision applications")
    p.add_argument("--map", default=None)
    p.add_argument("--seed", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("verify-label", help="validate an exported label dump")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_verify_label)

    p = sub.add_parser("parse-check", help="validate a map definition file")
    p.add_argument("--map", required=True, help="map file path")
    _add_common(p)
    p.set_defaults(func=cmd_parse_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MapSyntaxError, EmptyComponentList, UnknownBuiltin) as exc:
        print(f"simplexfp: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MapRangeError as exc:
        print(f"simplexfp: map range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except RefinementExhausted as exc:
        print(f"simplexfp: {exc}", file=sys.stderr)
        return EXIT_REFINEMENT
    except ResourceCapExceeded as exc:
        print(f"simplexfp: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InternalError as exc:
        print(f"simplexfp: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SimplexError as exc:
        print(f"simplexfp: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"simplexfp: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
