"""Command line interface.

    paramgb dispgb FILE [--json | --text]
    paramgb tree FILE [--dot]
    paramgb discriminant FILE
    paramgb generic FILE
    paramgb iscgb FILE
    paramgb cgb FILE
    paramgb bench DIR [--only ID ...] [--timeout SECONDS]

Exit status: 0 on success, 1 on input errors, 2 when a guard trips.
"""

from __future__ import annotations

import argparse
import sys

from .bench import bench_dir, format_rows
from .cgbkit import (
    CgbGuardError, PreimageError, cgb, conjecture_report, generic_basis, is_cgb,
    principality_check, weispfenning_discriminant,
)
from .disptree import MAX_DEPTH, DepthGuardError, dispgb
from .idealkit import groebner
from .output import poly_list, system_json, system_text, tree_dot, tree_text
from .polycore import PolyParseError
from .sysfile import SystemFileError, load_system


def _load(path):
    sysf = load_system(path)
    ctx = sysf.context()
    return sysf, ctx, sysf.polynomials(ctx)


def cmd_dispgb(args, out):
    _, ctx, B = _load(args.file)
    system = dispgb(B, ctx, max_depth=args.max_depth)
    if args.json:
        gb = generic_basis(B, ctx)
        J = weispfenning_discriminant(B, ctx, gb)
        principal = principality_check(J, gb, ctx)[0]
        out.write(system_json(system, J, principal) + "\n")
    else:
        out.write(system_text(system))


def cmd_tree(args, out):
    _, ctx, B = _load(args.file)
    system = dispgb(B, ctx, max_depth=args.max_depth)
    out.write(tree_dot(system) if args.dot else tree_text(system))


def cmd_discriminant(args, out):
    _, ctx, B = _load(args.file)
    system = dispgb(B, ctx, max_depth=args.max_depth)
    gb = generic_basis(B, ctx)
    J = weispfenning_discriminant(B, ctx, gb)
    principal, gen, cand, matches = principality_check(J, gb, ctx)
    j_in_n, n_in_j = conjecture_report(J, system.discriminant, ctx)
    N = system.discriminant
    out.write(f"N = {poly_list(N)}\n")
    out.write(f"J = {poly_list(J)}\n")
    out.write(f"N principal: {'yes' if len(N) <= 1 else 'no'} ({len(N)} generators)\n")
    if principal:
        out.write(f"J principal: yes, generated by {gen}\n")
    else:
        out.write("J principal: no\n")
    verdict = "generates J" if matches else "does not generate J"
    out.write(f"squarefree lcm of denominators: {cand} ({verdict})\n")
    out.write(f"J in N: {str(j_in_n).lower()}\n")
    out.write(f"N in J: {str(n_in_j).lower()}\n")
    if not j_in_n:
        raise AssertionError("J is not contained in N")


def cmd_generic(args, out):
    _, ctx, B = _load(args.file)
    gb = generic_basis(B, ctx)
    out.write("G = [" + ", ".join(str(g) for g in gb.G) + "]\n")
    out.write(f"d = {poly_list(gb.d)}\n")
    out.write(f"G2 = {poly_list(gb.G2)}\n")


def cmd_iscgb(args, out):
    _, ctx, B = _load(args.file)
    system = dispgb(B, ctx, max_depth=args.max_depth)
    rep = is_cgb(groebner(B, ctx.S), system)
    out.write(("true" if rep.is_cgb else "false") + "\n")
    for line in rep.lines(ctx):
        out.write(line + "\n")


def cmd_cgb(args, out):
    _, ctx, B = _load(args.file)
    system = dispgb(B, ctx, max_depth=args.max_depth)
    B0 = groebner(B, ctx.S)
    basis, rounds = cgb(B0, system, B)
    out.write(f"# {len(basis) - len(B0)} polynomials added in {rounds} rounds\n")
    out.write(poly_list(basis) + "\n")


def cmd_bench(args, out):
    rows = bench_dir(args.dir, set(args.only) if args.only else None, args.timeout)
    out.write(format_rows(rows))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paramgb", description="Discussion of parametric polynomial systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file")
        sp.add_argument("--max-depth", type=int, default=MAX_DEPTH)
        sp.set_defaults(func=func)
        return sp

    sp = with_file("dispgb", cmd_dispgb, "print the Gröbner system")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--text", action="store_true")
    sp = with_file("tree", cmd_tree, "print the discussion tree")
    sp.add_argument("--dot", action="store_true")
    with_file("discriminant", cmd_discriminant, "discriminant ideals and conjecture report")
    with_file("generic", cmd_generic, "generic basis and its denominators")
    with_file("iscgb", cmd_iscgb, "check the product-order basis case by case")
    with_file("cgb", cmd_cgb, "construct a comprehensive basis")
    sp = sub.add_parser("bench", help="benchmark table over a directory of .sys files")
    sp.add_argument("dir")
    sp.add_argument("--only", nargs="*")
    sp.add_argument("--timeout", type=float, default=None)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except (SystemFileError, PolyParseError, FileNotFoundError, IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (DepthGuardError, CgbGuardError, PreimageError) as e:
        print(f"guard: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
