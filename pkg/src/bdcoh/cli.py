"""The ``bdcoh`` command line.

Exit codes: 0 when every requested check passes, 1 when a check or
validation fails (the report is still printed), 2 on malformed input or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Callable

import numpy as np

from .bd import ThetaFamily, safe_verify_bd_axioms, validate_situation_starstar
from .cohomology import CohomologyContext
from .connecting import bockstein_ses, theta_cochain, validate_situation_star
from .errors import BDCohError, DegreeOverflow, FamilyNotValidated, MalformedInput, NotPrime
from .examples import build_c3_family, build_cp_bockstein_family, report_delta_table
from .io import algebra_from_json, dumps, family_from_json, group_from_json, load_source, module_from_json, ses_from_json
from .products import CupTable
from .report import Report, jsonable
from .snf import smith_normal_form


class InputError(Exception):
    """Raised while loading inputs; always exit code 2."""


def _load(loader: Callable, value: str, *args):
    try:
        return loader(load_source(value), *args)
    except BDCohError as exc:
        raise InputError(str(exc)) from exc


def _load_family(value: str) -> ThetaFamily:
    def loader(doc):
        if isinstance(doc, dict) and "family" in doc and "members" not in doc:
            doc = doc["family"]
        return family_from_json(doc)

    return _load(loader, value)


# ---------------------------------------------------------------- commands


def cmd_cohomology(args) -> tuple[Report, dict]:
    group = _load(group_from_json, args.group)
    module = _load(module_from_json, args.module, group)
    ctx = CohomologyContext(module, args.max_degree)
    rep = Report(f"H^n(G, A) for n <= {args.max_degree}")
    degrees = []
    for n in range(args.max_degree + 1):
        factors = ctx.invariant_factors(n)
        rep.add(f"H^{n}", True, detail=f"order {ctx.order(n)}  invariant factors {factors}")
        entry = {"degree": n, "order": ctx.order(n), "invariant_factors": factors}
        if args.representatives:
            entry["representatives"] = [r.table.tolist() for r in ctx.degree_data(n).representatives]
        degrees.append(entry)
    return rep, {"degrees": degrees}


def cmd_cup(args) -> tuple[Report, dict]:
    group = _load(group_from_json, args.group)
    alg = _load(algebra_from_json, args.algebra, group)
    m, n = args.deg
    ctx = CohomologyContext(alg, m + n)
    table = CupTable(ctx).table(m, n)
    rep = Report(f"cup products H^{m} x H^{n} -> H^{m + n} on basis classes")
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            rep.add(f"H{m}[{i}] u H{n}[{j}]", True, detail=f"-> {table[i, j].tolist()}")
    return rep, {"m": m, "n": n, "invariant_factors": [ctx.invariant_factors(k) for k in (m, n, m + n)], "table": table.tolist()}


def _theta_matrices(ses, ctx: CohomologyContext, top: int) -> list[list[list[int]]]:
    out = []
    for n in range(top + 1):
        out.append([ctx.coordinates(theta_cochain(ses, c.representative)).tolist() for c in ctx.basis(n)])
    return out


def cmd_theta(args) -> tuple[Report, dict]:
    ses = _load(ses_from_json, args.ses)
    rep = Report(f"connecting homomorphism on basis classes, n <= {args.max_degree}")
    star = validate_situation_star(ses)
    rep.extend(star, prefix="situation_star.")
    data: dict[str, Any] = {}
    if not star.passed:
        return rep, data
    ctx = CohomologyContext(ses.A, args.max_degree + 1)
    mats = _theta_matrices(ses, ctx, args.max_degree)
    for n, rows in enumerate(mats):
        for k, row in enumerate(rows):
            rep.add(f"theta(H{n}[{k}])", True, detail=f"-> {row}")
    data["theta"] = [{"degree": n, "images": rows} for n, rows in enumerate(mats)]
    return rep, data


def cmd_verify_sitstar(args) -> tuple[Report, dict]:
    ses = _load(ses_from_json, args.ses)
    return validate_situation_star(ses), {}


def cmd_verify_sitstarstar(args) -> tuple[Report, dict]:
    family = _load_family(args.family)
    return validate_situation_starstar(family, cutoff=args.cutoff), {}


def cmd_bd_axioms(args) -> tuple[Report, dict]:
    family = _load_family(args.family)
    return safe_verify_bd_axioms(family, cutoff=args.cutoff), {}


def cmd_bd_table(args) -> tuple[Report, dict]:
    family = _load_family(args.family)
    try:
        table = report_delta_table(family, args.max_degree)
    except FamilyNotValidated as exc:
        rep = Report("Delta_BD table")
        rep.add("family_validated", False, exc.witness, detail=str(exc))
        return rep, {}
    rep = Report(f"Delta_BD on basis classes through degree {args.max_degree}")
    for row in table["rows"]:
        rep.add(f"{row['g']}(x)H{row['degree']}[{row['basis_index']}]", True, detail=f"-> {row['delta']}")
    return rep, table


def _bijective(rows: list[list[int]], dim_out: int, p: int) -> bool:
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), dim_out)
    if mat.shape[0] != mat.shape[1]:
        return False
    diag, _, _ = smith_normal_form(mat.tolist()) if len(mat) else ([], None, None)
    return all(int(d) % p for d in diag[: len(mat)])


def cmd_bockstein(args) -> tuple[Report, dict]:
    p = args.p
    ses = bockstein_ses(p)
    rep = Report(f"Bockstein of Z/{p} -> Z/{p * p} -> Z/{p} on H^n(C_{p}, F_{p}), n <= {args.max_degree}")
    star = validate_situation_star(ses)
    rep.extend(star, prefix="situation_star.")
    if not star.passed:
        return rep, {}
    ctx = CohomologyContext(ses.A, args.max_degree + 1)
    mats = _theta_matrices(ses, ctx, args.max_degree)
    for n, rows in enumerate(mats):
        dim_out = ctx.dimension(n + 1)
        if n % 2:
            rep.add(f"bijective_on_H{n}", _bijective(rows, dim_out, p), detail=f"matrix {rows}")
        else:
            zero = not np.array(rows).any()
            rep.add(f"zero_on_H{n}", zero, None if zero else rows, detail=f"matrix {rows}")
        if n + 1 <= args.max_degree:
            comp = (np.array(rows, dtype=np.int64).reshape(-1, dim_out) @ np.array(mats[n + 1], dtype=np.int64).reshape(dim_out, -1)) % p
            rep.add(f"beta_squared_zero_on_H{n}", not comp.any(), None if not comp.any() else comp.tolist())
    return rep, {"p": p, "theta": [{"degree": n, "images": rows} for n, rows in enumerate(mats)]}


def cmd_example(args) -> tuple[Report, dict]:
    if args.name == "c3":
        family = build_c3_family()
    else:
        if args.p is None:
            raise InputError("example cp needs --p")
        family = build_cp_bockstein_family(args.p)
    rep = Report(f"built-in family {args.name}")
    return rep, {"family": family.to_json()}


COMMANDS = {
    "cohomology": cmd_cohomology,
    "cup": cmd_cup,
    "theta": cmd_theta,
    "verify-sitstar": cmd_verify_sitstar,
    "verify-sitstarstar": cmd_verify_sitstarstar,
    "bd-axioms": cmd_bd_axioms,
    "bd-table": cmd_bd_table,
    "bockstein": cmd_bockstein,
    "example": cmd_example,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdcoh", description="Exact group cohomology, connecting maps and BD structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="emit the machine-readable report")
        return p

    src_help = "inline JSON, a file path, or - for standard input"
    p = add("cohomology", "invariant factors of H^n(G, A)")
    p.add_argument("--group", required=True, help=src_help)
    p.add_argument("--module", required=True, help=src_help)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--representatives", action="store_true", help="include representative cocycle tables")

    p = add("cup", "cup products of basis classes")
    p.add_argument("--group", required=True, help=src_help)
    p.add_argument("--algebra", required=True, help=src_help)
    p.add_argument("--deg", type=int, nargs=2, required=True, metavar=("M", "N"))

    p = add("theta", "connecting homomorphism of a short exact sequence")
    p.add_argument("--ses", required=True, help=src_help)
    p.add_argument("--max-degree", type=int, required=True)

    p = add("verify-sitstar", "validate a short exact sequence with section and retraction")
    p.add_argument("--ses", required=True, help=src_help)

    p = add("verify-sitstarstar", "validate a family of sequences indexed by G")
    p.add_argument("--family", default="-", help=src_help + " (default: standard input)")
    p.add_argument("--cutoff", type=int, default=6)

    p = add("bd-axioms", "check the BD axioms on KG (x) H*(G, A)")
    p.add_argument("--family", default="-", help=src_help + " (default: standard input)")
    p.add_argument("--cutoff", type=int, default=4)

    p = add("bd-table", "Delta_BD on every basis class")
    p.add_argument("--family", default="-", help=src_help + " (default: standard input)")
    p.add_argument("--max-degree", type=int, default=4)

    p = add("bockstein", "the classical Bockstein on H^n(C_p, F_p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=5)

    p = add("example", "print a built-in family as JSON")
    p.add_argument("name", choices=["c3", "cp"])
    p.add_argument("--p", type=int)
    return parser


def _envelope(args, rep: Report, data: dict, elapsed_ms: float) -> dict:
    inputs = {k: v for k, v in vars(args).items() if k not in ("json", "command")}
    doc = {
        "command": args.command,
        "inputs": jsonable(inputs),
        "results": rep.results(),
        "timing_ms": round(elapsed_ms, 3),
    }
    if rep.flags:
        doc["flags"] = jsonable(rep.flags)
    if rep.notes:
        doc["notes"] = list(rep.notes)
    if data:
        doc["data"] = jsonable(data)
    return doc


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    for name in ("max_degree", "cutoff"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"bdcoh: --{name.replace('_', '-')} must be non-negative", file=stderr)
            return 2
    if getattr(args, "p", None) is not None and args.p < 2:
        print("bdcoh: --p must be a prime", file=stderr)
        return 2
    start = time.perf_counter()
    try:
        rep, data = COMMANDS[args.command](args)
    except (InputError, MalformedInput, DegreeOverflow, NotPrime) as exc:
        print(f"bdcoh: {exc}", file=stderr)
        return 2
    except BDCohError as exc:
        rep, data = Report(args.command), {}
        rep.add(type(exc).__name__, False, exc.witness, detail=str(exc))
    elapsed = (time.perf_counter() - start) * 1000
    if args.command == "example" and not args.json:
        print(dumps(data["family"]), file=stdout)
        return 0
    if args.json:
        print(json.dumps(_envelope(args, rep, data, elapsed), indent=2), file=stdout)
    else:
        print(rep.to_text(), file=stdout)
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
