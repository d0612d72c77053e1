"""Independent radical-membership oracle built on sympy Groebner bases.

This shares no code with the triangular machinery: membership of ``f`` in the
radical of ``<F>`` is decided by the Rabinowitsch trick, i.e. ``1`` lies in
``<F, 1 - t*f>``.  Inequations ``q`` are folded in by testing ``f * prod(q)``,
which decides whether ``f`` vanishes on the closure of ``Z(F) minus Z(q)``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import sympy

from .polynomial import Polynomial, VariableOrder

__all__ = ["OracleInapplicable", "oracle_membership", "to_sympy"]

MAX_VARS = 4
MAX_DEGREE = 8


class OracleInapplicable(ValueError):
    """The system is outside the range the oracle is meant for."""


def to_sympy(p: Polynomial, symbols) -> sympy.Expr:
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(symbols, e):
            if k:
                term *= s ** k
        expr += term
    return expr


@lru_cache(maxsize=256)
def _basis(gens: tuple, names: tuple):
    syms = [sympy.Symbol(nm) for nm in names]
    return sympy.groebner(list(gens), *syms, order="grevlex", domain="QQ")


def oracle_membership(f: Polynomial, generators: Sequence[Polynomial], order: VariableOrder,
                      inequations: Sequence[Polynomial] = ()) -> bool:
    """Decide ``f`` in the radical of the generators (outside inequation loci)."""
    n = len(order)
    if n > MAX_VARS:
        raise OracleInapplicable(f"{n} variables exceeds the oracle cap of {MAX_VARS}")
    deg = max([g.total_degree() for g in generators] + [f.total_degree(), 0])
    if deg > MAX_DEGREE:
        raise OracleInapplicable(f"degree {deg} exceeds the oracle cap of {MAX_DEGREE}")
    if f.is_zero():
        return True
    if not generators:
        return False
    names = tuple(order.names)
    syms = [sympy.Symbol(nm) for nm in names]
    target = f
    for q in inequations:
        target = target * q
    gens = tuple(sympy.expand(to_sympy(g, syms)) for g in generators)
    G = _basis(gens, names)
    if G.exprs == [1]:
        return True
    t_expr = to_sympy(target, syms)
    # cheap certificate: a small power already lies in the ideal
    power = sympy.Integer(1)
    for _ in range(3):
        power = sympy.expand(power * t_expr)
        if G.contains(power):
            return True
    t = sympy.Dummy("t")
    H = sympy.groebner(list(gens) + [1 - t * t_expr], *syms, t, order="grevlex", domain="QQ")
    return H.exprs == [1]
