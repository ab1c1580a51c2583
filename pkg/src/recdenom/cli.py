"""Command line entry point.

Exit codes: 0 success, 1 unsolvable or inconsistent system, 2 usage or
parse error. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .bound import complete_bound_guess, denbound
from .dispersion import spread
from .field import FieldSpec
from .ore import LinearSystem, clear_denominators
from .oracle import ConstructionError, check_divisibility, field_cases, random_instance
from .reduction import row_reduce
from .regularise import Unsolvable, regularise
from .solver import EACH, TOTAL, rational_solutions
from .sysfile import SystemFile, parse_system
from .textfmt import ParseError

EXIT_OK, EXIT_UNSOLVABLE, EXIT_USAGE = 0, 1, 2
SEED_ENV = "RECDENOM_SEED"


class UsageError(Exception):
    pass


def _load(path: str) -> SystemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_system(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _fmt_degree(x) -> str:
    return "-inf" if x == float("-inf") else str(x)


def _print_system(label: str, system: LinearSystem, out) -> None:
    print(f"{label}:", file=out)
    for line in str(system.op).splitlines():
        print(f"  {line}", file=out)
    print("  b = [" + ", ".join(str(x) for x in system.rhs) + "]", file=out)


def _print_transform(label: str, op, out) -> None:
    print(f"{label}:", file=out)
    for line in str(op).splitlines():
        print(f"  {line}", file=out)


def _powers(text: str | None, field: FieldSpec, default=None):
    """``--powers 1,0`` (one per generator) or ``--powers t1=1,t2=0``."""
    if text is None:
        return default
    items = [x.strip() for x in text.split(",") if x.strip()]
    try:
        if items and all("=" in x for x in items):
            out = {}
            for x in items:
                name, value = x.split("=", 1)
                out[name.strip()] = int(value)
            return out
        return [int(x) for x in items]
    except ValueError:
        raise UsageError(f"malformed --powers value {text!r}") from None


# subcommands ----------------------------------------------------------------

def cmd_spread(args, out) -> int:
    try:
        field = FieldSpec.from_header(args.field)
        a, b = field.poly(args.a), field.poly(args.b)
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    gen = args.gen if args.gen is not None else 0
    try:
        result = spread(field, a, b, gen, method=args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(result, file=out)
    return EXIT_OK


def cmd_rowreduce(args, out) -> int:
    sf = _load(args.file)
    system, _ = clear_denominators(sf.system)
    red = row_reduce(system.op)
    print("R:", file=out)
    for line in str(red.R).splitlines():
        print(f"  {line}", file=out)
    _print_transform("P", red.P.fwd, out)
    print("row degrees = [" + ", ".join(_fmt_degree(x) for x in red.R.row_degrees()) + "]", file=out)
    print(f"rank = {red.rank}", file=out)
    return EXIT_OK


def _report_unsolvable(exc: Unsolvable, out) -> int:
    print("unsolvable: nonzero compatibility conditions", file=out)
    for w in exc.witness:
        print(f"  {w} = 0", file=out)
    return EXIT_UNSOLVABLE


def cmd_regularize(args, out) -> int:
    sf = _load(args.file)
    try:
        reg = regularise(sf.system)
    except Unsolvable as exc:
        return _report_unsolvable(exc, out)
    _print_system("head", reg.head, out)
    _print_system("tail", reg.tail, out)
    compat = [str(c) for c in reg.compat]
    print("compatibility = [" + ", ".join(compat) + "]", file=out)
    print("free variables = [" + ", ".join(str(i) for i in reg.free_vars) + "]", file=out)
    _print_transform("P", reg.P_total.fwd, out)
    _print_transform("Q", reg.Q_total.fwd, out)
    _print_transform("tail transform", reg.tail_transform.fwd, out)
    return EXIT_OK


def _denbound(sf: SystemFile, merge: str | None):
    merge = merge or sf.options.get("merge", "improved")
    return denbound(sf.system, merge=merge)


def cmd_denbound(args, out) -> int:
    sf = _load(args.file)
    try:
        db = _denbound(sf, args.merge)
    except Unsolvable as exc:
        return _report_unsolvable(exc, out)
    print(f"m = {db.m.factored_str(True)}", file=out)
    print(f"p = {db.p.factored_str(True)}", file=out)
    for g in db.per_generator:
        line = f"D[{g.gen}] = {_fmt_degree(g.D)}"
        if g.d is not None:
            line += f"; d[{g.gen}] = {g.d.factored_str(True)}"
        print(line, file=out)
    print(f"D = {_fmt_degree(db.D)}", file=out)
    print(f"d = {db.d.factored_str(True)}", file=out)
    if not db.covers_all:
        print("free variables = [" + ", ".join(str(i) for i in db.free_vars) + "] (not bounded)", file=out)
    powers = _powers(args.powers, sf.field, sf.options.get("powers"))
    if powers is not None:
        try:
            guess = complete_bound_guess(db, sf.field, powers)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        print(f"guess = {guess.factored_str(True)}", file=out)
    return EXIT_OK


def default_degree(system: LinearSystem) -> int:
    """Twice the largest coefficient degree: a starting guess, not a bound."""
    degs = [x.num.degree() for M in system.op.coeffs.values() for row in M for x in row if not x.is_zero()]
    return 2 * max(degs, default=0)


def cmd_solve(args, out) -> int:
    sf = _load(args.file)
    field = sf.field
    degree = args.degree if args.degree is not None else sf.options.get("degree")
    heuristic = degree is None
    if heuristic:
        degree = default_degree(sf.system)
    kind = args.kind or sf.options.get("kind", EACH)
    try:
        if args.denbound == "auto":
            db = _denbound(sf, args.merge)
            powers = _powers(args.powers, field, sf.options.get("powers"))
            den = complete_bound_guess(db, field, powers)
        else:
            den = field.poly(args.denbound)
    except Unsolvable as exc:
        return _report_unsolvable(exc, out)
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    sol = rational_solutions(sf.system, den, degree, kind)
    print(f"denominator = {den.factored_str(True)}", file=out)
    print(f"degree bound = {degree} ({kind}{', heuristic' if heuristic else ''})", file=out)
    if not sol.consistent():
        print("no solution with this denominator and degree bound", file=out)
        return EXIT_UNSOLVABLE
    if not sf.system.is_homogeneous():
        print("particular = [" + ", ".join(str(x) for x in sol.particular) + "]", file=out)
    print(f"dimension = {sol.dimension}", file=out)
    for i, v in enumerate(sol.basis):
        print(f"basis[{i}] = [" + ", ".join(str(x) for x in v) + "]", file=out)
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))
    rows = []
    failed = 0
    for case, fields in field_cases().items():
        for field in fields:
            passed = bad = 0
            start = time.perf_counter()
            for i in range(args.cases):
                try:
                    inst = random_instance(field, seed + i)
                    ok = check_divisibility(denbound(inst.system), inst)
                except ConstructionError:
                    ok = False
                passed += ok
                bad += not ok
            rows.append((case, field.header(), passed, bad, time.perf_counter() - start))
            failed += bad
    width = max(len(r[1]) for r in rows)
    print(f"{'case':<11} {'field':<{width}} {'pass':>5} {'fail':>5} {'result':>6}", file=out)
    for case, header, passed, bad, _ in rows:
        result = "PASS" if not bad else "FAIL"
        print(f"{case:<11} {header:<{width}} {passed:>5} {bad:>5} {result:>6}", file=out)
    if args.timing:
        for case, header, *_, secs in rows:
            print(f"time {header}: {secs:.2f}s", file=sys.stderr)
    print(f"seed = {seed}; total failures = {failed}", file=out)
    return EXIT_OK if not failed else EXIT_UNSOLVABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recdenom", description="Denominator bounds and rational solutions of linear difference systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spread", help="spread and dispersion of two polynomials")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--field", required=True, help="field header, e.g. 'qrational(q; t)'")
    p.add_argument("--gen", help="generator name (default: the first)")
    p.add_argument("--method", default="auto", choices=["auto", "roots", "scan", "factor", "resultant"])
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("rowreduce", help="row-reduce the operator of a system file")
    p.add_argument("file")
    p.set_defaults(func=cmd_rowreduce)

    p = sub.add_parser("regularize", help="head and tail regular related systems")
    p.add_argument("file")
    p.set_defaults(func=cmd_regularize)

    p = sub.add_parser("denbound", help="aperiodic denominator bound")
    p.add_argument("file")
    p.add_argument("--merge", choices=["improved", "lcm"])
    p.add_argument("--powers", help="periodic powers, e.g. '1,0' or 't1=1,t2=0'")
    p.set_defaults(func=cmd_denbound)

    p = sub.add_parser("solve", help="rational solutions with a given denominator")
    p.add_argument("file")
    p.add_argument("--denbound", default="auto", help="'auto' or an explicit polynomial")
    p.add_argument("--degree", type=int, help="numerator degree bound (default: options block, else twice the largest coefficient degree)")
    p.add_argument("--kind", choices=[EACH, TOTAL])
    p.add_argument("--merge", choices=["improved", "lcm"])
    p.add_argument("--powers")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("selftest", help="planted-instance soundness check")
    p.add_argument("--cases", type=int, default=10, help="instances per field")
    p.add_argument("--seed", type=int, help=f"first seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--timing", action="store_true", help="per-field timings on stderr")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"recdenom: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
