"""Command-line entry point.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage or parse
errors.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from math import isqrt
from typing import List, Optional, Sequence

from .decomposition import BudgetExceeded, DecompositionTask, decompose, degree_audit
from .groups import (
    OneParameterUnipotent,
    RationalHomomorphism,
    SubgroupPresentation,
    matrix_order,
    parse_group,
    parse_matrix,
    preimage_intersection,
    proto_check,
    unipotent_group_equations,
)
from .polynomial import Polynomial, VariableOrder, prem
from .textio import ParseError, parse_polynomial, parse_polynomial_file, parse_polynomial_list
from .triangular import (
    TriangularRepresentation,
    format_representation,
    parse_representation,
    representation_product,
    representation_restrict,
)

OK, FAILED, USAGE = 0, 1, 2

# the proto-Galois examples: (candidate, Galois group, expected pass, expected failing clause)
CATALOG_CASES = [
    ("Scalars", "FiniteCyclic(3)", True, None),
    ("FiniteCyclic(3)", "FiniteCyclic(3)", True, None),
    ("GL(2)", "SL(2)", True, None),
    ("SL(2)", "SL(2)", True, None),
    ("GL(2)", "UnipotentUpper(2)", False, "ii"),
    ("SL(2)", "UnipotentUpper(2)", False, "ii"),
    ("GL(2)", "Borel(2)", False, "ii"),
    ("SL(2)", "Borel(2)", False, "i"),
]


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _with_file(exc: ParseError, path: str) -> ParseError:
    exc.path = path
    return exc


def _order_from(text: Optional[str], exprs: Sequence[str]) -> VariableOrder:
    if text:
        return VariableOrder([s.strip() for s in text.split(",") if s.strip()])
    # no explicit order: every identifier in the inputs, sorted by name
    names = set()
    for e in exprs:
        names.update(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", e))
    return VariableOrder(sorted(names))


def _table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


# -- subcommands ----------------------------------------------------------------

def cmd_decompose(args) -> int:
    text = _read(args.file)
    try:
        order, polys = parse_polynomial_file(text)
    except ParseError as exc:
        raise _with_file(exc, args.file) from None
    if args.order:
        new = _order_from(args.order, [])
        if sorted(new.names) != sorted(order.names):
            raise UsageError("--order must list exactly the file's variables")
        polys = [p.reorder(new) for p in polys]
        order = new
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        R = TriangularRepresentation.zero_ideal(order)
    else:
        R = decompose(DecompositionTask(polys, order, max_steps=args.max_steps))
    sys.stdout.write(format_representation(R))
    if args.audit is not None:
        audit = degree_audit(R, max(len(order), 2), args.audit)
        print()
        print(_table(audit.rows()))
        return OK if audit.within else FAILED
    return OK


def cmd_prem(args) -> int:
    order = _order_from(args.vars, [args.f, args.set])
    f = parse_polynomial(args.f, order)
    G = parse_polynomial_list(args.set, order)
    print(prem(f, G))
    return OK


def _read_rep(path: str) -> TriangularRepresentation:
    try:
        return parse_representation(_read(path))
    except ParseError as exc:
        raise _with_file(exc, path) from None


def cmd_eliminate(args) -> int:
    R = _read_rep(args.file)
    if not 0 <= args.keep <= len(R.order):
        raise UsageError(f"keep-count must lie in 0..{len(R.order)}")
    sys.stdout.write(format_representation(representation_restrict(R, args.keep, shrink=True)))
    return OK


def cmd_product(args) -> int:
    a, b = _read_rep(args.first), _read_rep(args.second)
    if a.order != b.order:
        try:
            b = b.reorder(a.order)
        except KeyError:
            raise UsageError("the two representations use different variables") from None
    sys.stdout.write(format_representation(representation_product(a, b)))
    return OK


def _group(source: str) -> SubgroupPresentation:
    """A catalog name such as ``SL(2)`` or a polynomial file in ``x11..xnn``."""
    if os.path.exists(source):
        try:
            order, polys = parse_polynomial_file(_read(source))
        except ParseError as exc:
            raise _with_file(exc, source) from None
        n = isqrt(len(order))
        if n * n != len(order) or n == 0:
            raise UsageError(f"{source}: the variables must be the n^2 matrix entries")
        target = matrix_order(n)
        if sorted(order.names) != sorted(target.names):
            raise UsageError(f"{source}: expected variables {', '.join(target.names)}")
        return SubgroupPresentation(n, [p.reorder(target) for p in polys], source)
    try:
        return parse_group(source).presentation()
    except ValueError as exc:
        raise UsageError(f"{source!r} is neither a file nor a catalog group: {exc}") from None


def _homomorphism(text: str, denominator: Optional[str], n: int) -> RationalHomomorphism:
    order = matrix_order(n)
    if text.strip() == "det":
        if denominator:
            raise UsageError("--denominator does not combine with --tau det")
        return RationalHomomorphism.det(n)
    rows = re.findall(r"\[([^\[\]]*)\]", text)
    if not rows:
        raise UsageError("--tau must be 'det' or a matrix such as [[x11, 0], [0, 1]]")
    entries = [[parse_polynomial(c, order) for c in r.split(",")] for r in rows]
    q = parse_polynomial(denominator, order) if denominator else Polynomial.constant(order, 1)
    return RationalHomomorphism(n, len(entries), entries, q)


def cmd_preimage(args) -> int:
    H, Hp = _group(args.source), _group(args.target)
    tau = _homomorphism(args.tau, args.denominator, H.n)
    sys.stdout.write(format_representation(preimage_intersection(H, Hp, tau)))
    return OK


def cmd_unipotent(args) -> int:
    gens = []
    for text in args.matrices:
        gens.append(OneParameterUnipotent(parse_matrix(text)))
    R = unipotent_group_equations(gens, args.length, seed=args.seed)
    sys.stdout.write(format_representation(R))
    return OK


def cmd_proto_check(args) -> int:
    if args.catalog:
        rows = [("candidate", "galois group", "verdict", "expected", "match")]
        good = True
        for cand, gal, passed, clause in CATALOG_CASES:
            v = proto_check(parse_group(cand), parse_group(gal))
            got = "pass" if v.passed else f"fail ({v.failing_clause})"
            want = "pass" if passed else f"fail ({clause})"
            rows.append((cand, gal, got, want, "yes" if got == want else "NO"))
            good &= got == want
        print(_table(rows))
        print("all verdicts hold" if good else "some verdicts differ")
        return OK if good else FAILED
    if not (args.candidate and args.galois):
        raise UsageError("give CANDIDATE and GALOIS groups, or --catalog")
    try:
        cand, gal = parse_group(args.candidate), parse_group(args.galois)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    v = proto_check(cand, gal)
    print(v)
    return OK if v.passed else FAILED


def cmd_bounds(args) -> int:
    from .bounds import (
        bound_D,
        bound_d1,
        bound_d2,
        bound_d3,
        bound_dbar,
        comparison_report,
        decimal_digits,
        eval_exact,
        feng_bounds,
        format_steps,
        log_profile,
        verify_chain,
    )

    if args.digit_limit is not None:
        os.environ["TRIBOUND_DIGIT_LIMIT"] = str(args.digit_limit)
    n = args.n
    if n < 2:
        raise UsageError("--n must be at least 2")
    steps = []
    if args.verify_chain:
        steps += verify_chain(n)
    if args.compare_feng:
        if n != 2 and not args.verify_chain:
            print("note: the tower comparison is fixed at n = 2")
        steps += comparison_report()
    if not steps:
        d_tilde, index = feng_bounds(n)
        named = [("D", bound_D(n)), ("d1", bound_d1(n)), ("d2", bound_d2(n)), ("d3", bound_d3(n)),
                 ("dbar", bound_dbar(n)), ("dtilde", d_tilde), ("I", index)]
        rows = [("bound", "size")]
        for name, e in named:
            v = eval_exact(e, 20_000)
            size = f"{decimal_digits(v)} digits" if isinstance(v, int) else str(log_profile(e))
            rows.append((name, size))
        print(_table(rows))
        return OK
    print(format_steps(steps))
    if all(s.verdict == "holds" for s in steps):
        print("all verdicts hold")
        return OK
    bad = sum(s.verdict != "holds" for s in steps)
    print(f"{bad} of {len(steps)} verdicts do not hold")
    return FAILED


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tribound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="triangular decomposition of a polynomial file")
    d.add_argument("file", help="polynomial file ('-' for stdin)")
    d.add_argument("--order", help="comma-separated variable order, lowest first")
    d.add_argument("--audit", type=int, metavar="D", help="audit output degrees against n*D^(5.5n^3)")
    d.add_argument("--max-steps", type=int, default=100_000)
    d.set_defaults(run=cmd_decompose)

    r = sub.add_parser("prem", help="pseudo-remainder of f by a triangular set")
    r.add_argument("--f", required=True, help="the polynomial to reduce")
    r.add_argument("--set", required=True, help="members separated by ';', e.g. 'x; x*y'")
    r.add_argument("--vars", help="variable order, lowest first (default: sorted names)")
    r.set_defaults(run=cmd_prem)

    e = sub.add_parser("eliminate", help="restrict a representation to its first r variables")
    e.add_argument("file", help="representation file")
    e.add_argument("--keep", "-r", type=int, required=True, help="number of variables kept")
    e.set_defaults(run=cmd_eliminate)

    m = sub.add_parser("product", help="representation of the radical of a product ideal")
    m.add_argument("first")
    m.add_argument("second")
    m.set_defaults(run=cmd_product)

    g = sub.add_parser("preimage", help="tau^-1(H' meet tau(H)) for a rational homomorphism")
    g.add_argument("--source", required=True, help="H: catalog name or polynomial file")
    g.add_argument("--target", required=True, help="H': catalog name or polynomial file")
    g.add_argument("--tau", default="det", help="'det' or a matrix of numerators")
    g.add_argument("--denominator", help="common denominator of tau (default 1)")
    g.set_defaults(run=cmd_preimage)

    u = sub.add_parser("unipotent", help="equations of a group generated by one-parameter unipotents")
    u.add_argument("matrices", nargs="+", help="nilpotent generators such as '[[0,1],[0,0]]'")
    u.add_argument("--seed", type=int, default=0)
    u.add_argument("--length", type=int, help="product length (default: found from the Jacobian rank)")
    u.set_defaults(run=cmd_unipotent)

    c = sub.add_parser("proto-check", help="check the proto-Galois conditions on catalog groups")
    c.add_argument("candidate", nargs="?")
    c.add_argument("galois", nargs="?")
    c.add_argument("--catalog", action="store_true", help="run the built-in example pairs")
    c.set_defaults(run=cmd_proto_check)

    b = sub.add_parser("bounds", help="degree and index bounds")
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--compare-feng", action="store_true", help="compare with the earlier tower bounds")
    b.add_argument("--verify-chain", action="store_true", help="check each step of the derivation")
    b.add_argument("--digit-limit", type=int, help="exact-evaluation digit budget")
    b.set_defaults(run=cmd_bounds)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.run(args)
    except ParseError as exc:
        where = getattr(exc, "path", None)
        print(f"parse error: {where + ': ' if where else ''}{exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
