"""Command-line surface.

Subcommands: ``list``, ``check``, ``bider``, ``postlie``, ``verify-paper``.
All parameters are exact rationals written as ``p/q`` or integer literals;
floating point is rejected everywhere.  JSON reports are deterministic:
identical invocations produce byte-identical output (consequently wall-clock
timing appears only in the human-readable summaries, never in JSON).

Exit codes: 0 success / all checks pass, 1 a check or verification failed,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Sequence, Tuple

from . import catalog
from .core import (
    CheckReport,
    Window,
    check_super_jacobi,
    check_super_skew,
    index_str,
    twice,
    window,
)
from .engine import BiderQuery, solve_bider, solve_postlie
from .scalars import rat, rat_str
from .verifier import get_case, verify_all, window_dict

SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


def _parse_params(pairs: Optional[Sequence[str]]) -> Dict[str, object]:
    out: Dict[str, object] = {}
    for item in pairs or ():
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        name = name.strip()
        try:
            out[name] = rat(value)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def _default_window(alg_name: str, params: Dict[str, object],
                    for_check: bool = False) -> Tuple[str, int, int]:
    alg = catalog.get_algebra(_algebra_key(alg_name, params))
    half = any(f.lattice for f in alg.families.values())
    if for_check:
        return ("15/2" if half else "8"), 2, 2
    return ("11/2" if half else "6"), 2, 2


def _algebra_key(name: str, params: Dict[str, object]) -> catalog.CatalogKey:
    try:
        return catalog.key(name, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _window_from_args(args, default_n) -> Window:
    try:
        n = args.N if args.N is not None else default_n
        return window(n, args.K, args.interior)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit_json(payload: dict, args) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    if getattr(args, "json", False):
        sys.stdout.write(text)


def _params_dict(params: Dict[str, object]) -> Dict[str, str]:
    return {k: rat_str(v) for k, v in sorted(params.items())}


def cmd_list(args) -> int:
    entries = catalog.list_catalog()
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "list",
            "catalog": [e.as_dict() for e in entries],
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return 0
    for e in entries:
        params = f" params: {','.join(e.parameters)}" if e.parameters else ""
        over = f" over {e.over}" if e.over else ""
        print(f"{e.name}  [{e.kind}{over}]{params}")
        for fam, lat, par, central in e.families:
            tag = " central" if central else ""
            print(f"    {fam:3s} lattice {lat:6s} {par}{tag}")
    return 0


def _print_check(report: CheckReport) -> None:
    print(str(report))


def cmd_check(args) -> int:
    params = _parse_params(args.param)
    key = _algebra_key(args.algebra, params)
    default_n, _, _ = _default_window(args.algebra, params, for_check=True)
    try:
        n2 = twice(args.N if args.N is not None else default_n)
        w = Window(n2, 0, min(n2, 4))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    alg = catalog.get_algebra(key)
    t0 = time.monotonic()
    skew = check_super_skew(alg, w)
    jac = check_super_jacobi(alg, w)
    _print_check(skew)
    _print_check(jac)
    print(f"elapsed {1000 * (time.monotonic() - t0):.0f} ms")
    return 0 if (skew.passed and jac.passed) else 1


def _basis_json(space, max_cells: int = 12) -> List[dict]:
    unk = space.unknowns
    nint2 = unk.window.nint2
    out = []
    for v in space.solution.basis:
        comps: Dict[Tuple[str, str, str, int], List[dict]] = {}
        for col in sorted(v):
            key = unk.key_of(col)
            fa, a2, fb, b2, fo, t2 = key
            k2 = t2 - a2 - b2
            comps.setdefault((fa, fb, fo, k2), []).append(
                {
                    "m": index_str(a2),
                    "n": index_str(b2),
                    "t": index_str(t2),
                    "coeff": rat_str(v[col]),
                    "interior": abs(a2) <= nint2 and abs(b2) <= nint2,
                }
            )
        comp_list = []
        for (fa, fb, fo, k2), cells in sorted(comps.items()):
            comp_list.append(
                {
                    "pair": [fa, fb],
                    "output_family": fo,
                    "k": index_str(k2),
                    "cells_total": len(cells),
                    "cells": [c for c in cells if c["interior"]][:max_cells],
                }
            )
        out.append({"components": comp_list, "normalized": True})
    return out


def _basis_summary(space) -> List[str]:
    unk = space.unknowns
    lines = []
    for v in space.solution.basis:
        comps = {}
        for col in v:
            fa, a2, fb, b2, fo, t2 = unk.key_of(col)
            comps.setdefault((fa, fb, fo, t2 - a2 - b2), 0)
            comps[(fa, fb, fo, t2 - a2 - b2)] += 1
        desc = ", ".join(
            f"({fa},{fb})->{fo}[k={index_str(k2)}]" for fa, fb, fo, k2 in sorted(comps)
        )
        lines.append(desc)
    return lines


def cmd_bider(args) -> int:
    params = _parse_params(args.param)
    if (args.module is None) == (not args.adjoint):
        raise UsageError("choose exactly one of --module NAME or --adjoint")
    if args.module:
        # the parameter belongs to the density module; neither base algebra
        # (virasoro, svir-ramond) is parameterized
        alg_key = _algebra_key(args.algebra, {})
        try:
            mod_key = catalog.key(args.module, **params)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        alg_key = _algebra_key(args.algebra, params)
        mod_key = None
    default_n, _, _ = _default_window(args.algebra, dict(alg_key.params))
    w = _window_from_args(args, default_n)
    if w.n2 - w.nint2 < 4:
        raise UsageError(
            f"window too small: N={w.n_str} leaves no interior margin over "
            f"N_int={w.nint_str}"
        )
    query = BiderQuery(alg_key, mod_key, args.parity, args.symmetry, w)
    t0 = time.monotonic()
    space = solve_bider(query)
    elapsed_ms = 1000 * (time.monotonic() - t0)
    interior = space.interior()
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "bider",
        "algebra": args.algebra,
        "module": args.module or "adjoint",
        "params": _params_dict(params),
        "window": window_dict(w),
        "parity": args.parity,
        "symmetry": args.symmetry,
        "interior_dimension": interior.dimension,
        "window_dimension": space.dimension,
        "basis": _basis_json(space),
        "status": "ok",
        "witnesses": [],
    }
    _emit_json(payload, args)
    print(query.label())
    print(f"interior dimension {interior.dimension} "
          f"(window dimension {space.dimension})")
    for line in _basis_summary(space):
        print(f"  basis vector: {line}")
    print(f"elapsed {elapsed_ms:.0f} ms")
    return 0


def cmd_postlie(args) -> int:
    params = _parse_params(args.param)
    alg_key = _algebra_key(args.algebra, params)
    default_n, _, _ = _default_window(args.algebra, params)
    w = _window_from_args(args, default_n)
    if w.n2 - w.nint2 < 4:
        raise UsageError(
            f"window too small: N={w.n_str} leaves no interior margin over "
            f"N_int={w.nint_str}"
        )
    t0 = time.monotonic()
    result = solve_postlie(alg_key, w)
    elapsed_ms = 1000 * (time.monotonic() - t0)
    asserted = args.algebra not in ("w0b",)
    obstruction_triples = sorted({eq.triple for eq in result.obstruction.equations})
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "postlie",
        "algebra": args.algebra,
        "module": "adjoint",
        "params": _params_dict(params),
        "window": window_dict(w),
        "parity": "both",
        "symmetry": "symmetric",
        "status": result.status,
        "asserted_by_catalog": asserted,
        "interior_dimension": result.interior_dimension,
        "product_parameters": result.obstruction.parameters,
        "obstruction_triples": [list(t) for t in obstruction_triples[:50]],
        "obstruction_triples_total": len(obstruction_triples),
        "quadratic_zero": result.obstruction.quadratic_zero,
        "witnesses": _postlie_witnesses(result),
    }
    _emit_json(payload, args)
    print(f"postlie({alg_key.label()}, N={w.n_str}, K={w.k_str})")
    tag = "" if asserted else "  [status: not asserted by catalog claims]"
    print(f"status {result.status}; interior dimension {result.interior_dimension}{tag}")
    if result.parameter_space is not None and result.parameter_space.dimension:
        for wit in _postlie_witnesses(result):
            print(f"  surviving product: {wit}")
    print(f"elapsed {elapsed_ms:.0f} ms")
    return 0


def _postlie_witnesses(result) -> List[str]:
    out = []
    if result.parameter_space is not None:
        for t in result.parameter_space.basis:
            desc = " + ".join(
                f"{rat_str(c)}*{result.obstruction.parameters[i]}"
                for i, c in sorted(t.items())
            )
            out.append(desc)
    return out


def cmd_verify_paper(args) -> int:
    case_ids = args.case or None
    if case_ids:
        for cid in case_ids:
            get_case(cid)  # raises on unknown case
    params = _parse_params(args.param)
    b_filter = params.get("b")
    w = None
    if args.N is not None:
        w = _window_from_args(args, args.N)
    t0 = time.monotonic()
    reports = verify_all(case_ids, w, b_filter)
    elapsed_ms = 1000 * (time.monotonic() - t0)
    all_pass = all(r.status == "pass" for r in reports)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify-paper",
        "cases": [r.as_dict() for r in reports],
        "summary": {
            "total": len(reports),
            "passed": sum(r.status == "pass" for r in reports),
            "status": "pass" if all_pass else "fail",
        },
    }
    _emit_json(payload, args)
    if not args.json:
        for r in reports:
            print(f"{r.case_id:6s} {r.status:18s} {r.description}")
            for s in r.samples:
                mark = "ok " if s.status == "pass" else "FAIL"
                extra = f"  [{s.detail}]" if s.detail else ""
                print(f"         {mark} {s.label:14s} computed {s.computed_dim} "
                      f"expected {s.expected_dim}{extra}")
                if s.witness:
                    print(f"              witness: {s.witness}")
        print(f"{sum(r.status == 'pass' for r in reports)}/{len(reports)} cases pass; "
              f"elapsed {elapsed_ms:.0f} ms")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superbider",
        description=(
            "Exact computations of centroids, super-biderivations and "
            "commutative post-Lie products on Virasoro-type Lie superalgebras."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list the algebra/module catalog")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list)

    def window_flags(p, with_k=True):
        p.add_argument("-N", help="generator index bound (integer or p/2)")
        if with_k:
            p.add_argument("-K", default="2",
                           help="degree-shift bound for unknowns (default 2)")
            p.add_argument("--interior", default="2",
                           help="interior slice bound N_int (default 2)")

    p = sub.add_parser("check", help="structural checks: super skew-symmetry and Jacobi")
    p.add_argument("--algebra", required=True, choices=catalog.ALGEBRA_NAMES)
    p.add_argument("--param", action="append", metavar="b=P/Q")
    p.add_argument("-N", help="generator index bound (default 8, 15/2 for half lattices)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bider", help="solve a super-biderivation problem")
    p.add_argument("--algebra", required=True, choices=catalog.ALGEBRA_NAMES)
    p.add_argument("--module", choices=catalog.MODULE_NAMES)
    p.add_argument("--adjoint", action="store_true",
                   help="target the algebra itself through its bracket")
    p.add_argument("--param", action="append", metavar="b=P/Q")
    p.add_argument("--parity", default="both", choices=("even", "odd", "both"))
    p.add_argument("--symmetry", default="none",
                   choices=("symmetric", "skew", "none"))
    window_flags(p)
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=cmd_bider)

    p = sub.add_parser("postlie", help="solve for commutative post-Lie products")
    p.add_argument("--algebra", required=True, choices=catalog.ALGEBRA_NAMES)
    p.add_argument("--param", action="append", metavar="b=P/Q")
    window_flags(p)
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=cmd_postlie)

    p = sub.add_parser("verify-paper",
                       help="run the catalog of classification-claim checks")
    p.add_argument("--case", action="append", metavar="ID",
                   help="restrict to a case id (repeatable)")
    p.add_argument("--param", action="append", metavar="b=P/Q",
                   help="restrict parameterized cases to one b value")
    window_flags(p)
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
