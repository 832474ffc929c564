"""Command-line entry point: JSON reports on stdout, exit 0 / 1 / 2.

Exit codes: 0 success, 1 a verification found defects, 2 bad usage or
out-of-domain input.  ``RB_WINDOW`` overrides the default window of any
command run without ``--window``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import DomainError, Signature
from .catalog import FAMILIES, GRID, K_VALUES, L_VALUES, Member, family, parse_member
from .classifier import EquationSystem, extends, match_catalog, solve
from .cybe import FormalTensor, make_cybe_solution, tensor_from_member, verify_formal_cybe
from .induced import (
    check_counterpart,
    format_failures,
    induced_postlie,
    induced_prelie,
    multiplication_table,
    postlie_defects,
    prelie_defect,
    scan_triples,
    window_basis,
)
from .operators import lifting_obstruction, verify_rb

SCHEMA = 1
DEFAULT_WINDOWS = {"verify": 10, "classify": 6, "cybe": 8, "induce": 6, "obstruction": 8}
PARAM_FLAGS = ("k", "l", "alpha", "beta", "gamma", "theta", "mu", "nu", "vartheta")
SIGNATURES = {"witt": Signature.WITT, "virasoro": Signature.VIRASORO}


class UsageError(Exception):
    pass


def _window(args) -> int:
    if args.window is not None:
        return args.window
    env = os.environ.get("RB_WINDOW")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"RB_WINDOW must be an integer, got {env!r}") from None
    return DEFAULT_WINDOWS[args.command]


def _member(args) -> Member:
    given = {p: getattr(args, p) for p in PARAM_FLAGS if getattr(args, p) is not None}
    if args.member:
        if args.family or given:
            raise UsageError("give either --member or --family with parameters")
        return parse_member(args.member)
    if not args.family:
        raise UsageError("--family or --member is required")
    return Member.of(args.family, given)


def _add_member_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="family name, e.g. W0_III")
    p.add_argument("--member", help="full id, e.g. 'W0_III{k=1,l=2,gamma=1}'")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", help="rational as p/q" if name not in ("k", "l") else "integer")


def cmd_catalog(args) -> tuple[dict, int]:
    rows = []
    for fam in FAMILIES.values():
        rows.append({
            "name": fam.name,
            "signature": fam.sig.value,
            "weight": fam.weight,
            "integer_params": list(fam.int_params),
            "rational_params": list(fam.rational_params),
            "degree": "2k" if fam.name in ("W0_II", "V0_III") else ("k" if "k" in fam.int_params else "0"),
            "description": fam.description,
        })
    grid = {"rational": [str(g) for g in GRID], "k": list(K_VALUES), "l": list(L_VALUES)}
    return {"families": rows, "grid": grid}, 0


def cmd_verify(args) -> tuple[dict, int]:
    member = _member(args)
    op = member.operator()
    weight = args.weight if args.weight is not None else str(family(member.family).weight)
    report = verify_rb(op, weight, _window(args))
    return {"member": str(member), "report": report.to_json()}, 0 if report.passed else 1


def cmd_classify(args) -> tuple[dict, int]:
    window = _window(args)
    eq = EquationSystem(SIGNATURES[args.sig], args.weight, args.degree, window)
    rows = []
    for table in solve(eq):
        match = match_catalog(table, eq)
        row = {"table": table.to_json(), **match.to_json()}
        if match.window_artifact_or_unclassified and args.extend:
            row["extends"] = extends(table, eq, 2 * window)
        rows.append(row)
    summary = {
        "solutions": len(rows),
        "matched": sum(1 for r in rows if r["matches"]),
        "multi_matched": sum(1 for r in rows if len(r["matches"]) > 1),
        "unmatched": sum(1 for r in rows if not r["matches"]),
    }
    return {"equations": {"signature": args.sig, "weight": args.weight, "degree": args.degree, "window": window},
            "solutions": rows, "summary": summary}, 0


def cmd_cybe(args) -> tuple[dict, int]:
    window = _window(args)
    if args.tensor:
        if args.solution or args.from_operator:
            raise UsageError("--tensor excludes --solution and --from-operator")
        try:
            obj = json.loads(Path(args.tensor).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read tensor: {exc}") from None
        tensor = FormalTensor.from_json(obj)
        source = {"tensor": args.tensor}
    else:
        if not args.solution:
            raise UsageError("--solution or --tensor is required")
        member = parse_member(args.solution)
        tensor = tensor_from_member(member) if args.from_operator else make_cybe_solution(member.family, member.kwargs)
        source = {"solution": str(member), "from_operator": bool(args.from_operator)}
    report = verify_formal_cybe(tensor, window)
    return {**source, "tensor": tensor.to_json(), "report": report.to_json()}, 0 if report.passed else 1


def cmd_induce(args) -> tuple[dict, int]:
    window = _window(args)
    member = _member(args)
    op = member.operator()
    basis = window_basis(op.sig, window)
    if args.kind == "prelie":
        product = induced_prelie(op)
        failures = scan_triples(lambda x, y, z: prelie_defect(product, x, y, z), basis)
    else:
        structure = induced_postlie(op)
        product = structure.circ
        failures = scan_triples(lambda x, y, z: postlie_defects(structure, x, y, z), basis)
    out = {
        "member": str(member),
        "kind": args.kind,
        "window": window,
        "defects": {"pass": not failures, "failures": format_failures(failures)},
    }
    if args.table:
        out["table"] = multiplication_table(product, window)
    try:
        bad = check_counterpart(member, window)
        out["catalog_agreement"] = {"pass": not bad, "mismatches": [[str(x), str(y)] for (x, y), _, _ in bad]}
    except DomainError as exc:
        out["catalog_agreement"] = {"skipped": str(exc)}
    ok = not failures and out["catalog_agreement"].get("pass", True)
    return out, 0 if ok else 1


def cmd_obstruction(args) -> tuple[dict, int]:
    member = _member(args)
    report = lifting_obstruction(member.operator(), _window(args))
    return {"member": str(member), "report": report.to_json()}, 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotabaxter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list operator families and the sampling grid")

    p = sub.add_parser("verify", help="check the Rota-Baxter identity on a window")
    _add_member_args(p)
    p.add_argument("--weight", help="defaults to the family's weight")
    p.add_argument("--window", type=int)

    p = sub.add_parser("classify", help="solve the defining equations on a window and match the catalog")
    p.add_argument("--sig", choices=sorted(SIGNATURES), required=True)
    p.add_argument("--weight", type=int, choices=(0, 1), required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--no-extend", dest="extend", action="store_false",
                   help="skip the doubled-window probe for unmatched tables")

    p = sub.add_parser("cybe", help="check the component form of the classical Yang-Baxter equation")
    p.add_argument("--solution", help="family id of a listed solution")
    p.add_argument("--from-operator", action="store_true", help="derive the tensor from the operator instead")
    p.add_argument("--tensor", help="path to a JSON tensor")
    p.add_argument("--window", type=int)

    p = sub.add_parser("induce", help="induced pre-Lie or PostLie product, axiom defects and tables")
    _add_member_args(p)
    p.add_argument("--kind", choices=("prelie", "postlie"), required=True)
    p.add_argument("--table", action="store_true", help="include the multiplication table")
    p.add_argument("--window", type=int)

    p = sub.add_parser("obstruction", help="cocycle obstruction to lifting a Witt operator")
    _add_member_args(p)
    p.add_argument("--window", type=int)
    return parser


COMMANDS = {
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "cybe": cmd_cybe,
    "induce": cmd_induce,
    "obstruction": cmd_obstruction,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "window", None) is not None and args.window < 1:
            raise UsageError("--window must be positive")
        body, code = COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"rotabaxter {args.command}: {exc}", file=sys.stderr)
        return 2
    report = {"schema": SCHEMA, "command": args.command, **body}
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
