"""Canonical forms for bound expressions.

The normalizer rewrites a tree into a form where equal values built in
different ways usually become structurally identical:

* sums and products are flattened, sorted and have their constants folded;
* like terms in sums are combined and constants distribute over sums;
* ``(x^a)^b`` becomes ``x^(ab)`` and powers of products are distributed;
* integer bases are reduced to their smallest root (``4^K`` becomes ``2^(2K)``);
* powers of one base inside a product are merged, and the constant part of the
  merged exponent is split off as an integer coefficient (when small) plus a
  fractional power.

All rewrites are value-preserving for non-negative operands.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Dict, List, Optional, Tuple

from sympy import perfect_power

from .exact import eval_exact
from .expr import (
    Add,
    Binomial,
    CentralBinomialMax,
    Const,
    Expr,
    Max,
    Mul,
    Pow,
    PowerDiff,
    SchurJ,
    Sub,
    Surd,
)

__all__ = ["norm", "linear_form", "power_form", "difference", "from_linear", "from_power", "key"]

SMALL_BITS = 4096
_SMALL_DIGITS = 1234

ONE = Const(1)
ZERO = Const(0)


def key(e: Expr) -> str:
    return repr(e)


def _small_const(e: Expr) -> Optional[Const]:
    v = eval_exact(e, _SMALL_DIGITS)
    if v is None:
        return None
    return Const(v)


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


# -- linear and multiplicative views ------------------------------------------

def _split_coef(t: Expr) -> Tuple[Fraction, Optional[Expr]]:
    if isinstance(t, Const):
        return t.value, None
    if isinstance(t, Mul) and isinstance(t.factors[0], Const):
        rest = t.factors[1:]
        return t.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), t


def linear_form(e: Expr) -> Tuple[Fraction, Dict[Expr, Fraction]]:
    """``(constant, {term: coefficient})`` for a normalized expression."""
    const = Fraction(0)
    terms: Dict[Expr, Fraction] = {}
    for t in (e.terms if isinstance(e, Add) else (e,)):
        c, rest = _split_coef(t)
        if rest is None:
            const += c
        else:
            terms[rest] = terms.get(rest, 0) + c
    return const, {t: c for t, c in terms.items() if c}


def from_linear(const: Fraction, terms: Dict[Expr, Fraction]) -> Expr:
    parts: List[Expr] = []
    if const:
        parts.append(Const(const))
    for t, c in terms.items():
        if c < 0:
            raise ValueError("negative coefficient in a bound expression")
        parts.append(t if c == 1 else Mul((Const(c), t)))
    if not parts:
        return ZERO
    return norm(parts[0] if len(parts) == 1 else Add(tuple(parts)))


def difference(a: Expr, b: Expr) -> Optional[Expr]:
    """``a - b`` when the linear forms show it is a non-negative combination."""
    ca, ta = linear_form(norm(a))
    cb, tb = linear_form(norm(b))
    const = ca - cb
    terms = dict(ta)
    for t, c in tb.items():
        terms[t] = terms.get(t, 0) - c
    terms = {t: c for t, c in terms.items() if c}
    if const < 0 or any(c < 0 for c in terms.values()):
        return None
    return from_linear(const, terms)


def power_form(e: Expr) -> Tuple[Fraction, Dict[Expr, Expr]]:
    """``(constant, {base: exponent})`` for a normalized expression."""
    const = Fraction(1)
    bases: Dict[Expr, Expr] = {}
    for f in (e.factors if isinstance(e, Mul) else (e,)):
        if isinstance(f, Const):
            const *= f.value
            continue
        if isinstance(f, Pow):
            b, x = f.base, f.exp
        else:
            b, x = f, ONE
        bases[b] = norm(Add((bases[b], x))) if b in bases else x
    return const, bases


def from_power(const: Fraction, bases: Dict[Expr, Expr]) -> Expr:
    factors: List[Expr] = [Const(const)]
    for b, x in bases.items():
        factors.append(Pow(b, x))
    return norm(Mul(tuple(factors)))


# -- normalization ---------------------------------------------------------------

@lru_cache(maxsize=20000)
def norm(e: Expr) -> Expr:
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return _norm_add([norm(t) for t in e.terms])
    if isinstance(e, Mul):
        return _norm_mul([norm(f) for f in e.factors])
    if isinstance(e, Pow):
        return _norm_pow(norm(e.base), norm(e.exp))
    if isinstance(e, Sub):
        left, right = norm(e.left), norm(e.right)
        d = difference(left, right)
        return d if d is not None else Sub(left, right)
    if isinstance(e, Binomial):
        out = Binomial(norm(e.top), norm(e.bottom))
        return _small_const(out) or out
    if isinstance(e, CentralBinomialMax):
        out = CentralBinomialMax(norm(e.top))
        return _small_const(out) or out
    if isinstance(e, SchurJ):
        out = SchurJ(norm(e.arg), e.k)
        return _small_const(out) or out
    if isinstance(e, PowerDiff):
        out = PowerDiff(norm(e.s), e.k)
        return _small_const(out) or out
    if isinstance(e, Surd):
        return _small_const(e) or e
    if isinstance(e, Max):
        items = sorted({norm(i) for i in e.items}, key=key)
        if len(items) == 1:
            return items[0]
        consts = [i for i in items if isinstance(i, Const)]
        if len(consts) == len(items):
            return max(consts, key=lambda c: c.value)
        return Max(tuple(items))
    raise TypeError(type(e).__name__)


def _norm_add(terms: List[Expr]) -> Expr:
    flat: List[Expr] = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    const = Fraction(0)
    coeffs: Dict[Expr, Fraction] = {}
    for t in flat:
        c, rest = _split_coef(t)
        if rest is None:
            const += c
        else:
            coeffs[rest] = coeffs.get(rest, 0) + c
    parts: List[Expr] = []
    for rest in sorted(coeffs, key=key):
        c = coeffs[rest]
        if c == 1:
            parts.append(rest)
        elif c:
            parts.append(_prepend_const(c, rest))
    if const:
        parts.insert(0, Const(const))
    if not parts:
        return ZERO
    if len(parts) == 1:
        return parts[0]
    return Add(tuple(parts))


def _prepend_const(c: Fraction, rest: Expr) -> Expr:
    if isinstance(rest, Mul):
        return Mul((Const(c),) + rest.factors)
    return Mul((Const(c), rest))


def _base_root(b: int) -> Tuple[int, int]:
    """``(r, k)`` with ``b = r^k`` and ``k`` maximal."""
    if b < 4:
        return b, 1
    pp = perfect_power(b)
    if not pp:
        return b, 1
    r, k = pp
    return int(r), int(k)


def _norm_mul(factors: List[Expr]) -> Expr:
    flat: List[Expr] = []
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    const = Fraction(1)
    bases: Dict[Expr, List[Expr]] = {}
    order: List[Expr] = []
    for f in flat:
        if isinstance(f, Const):
            const *= f.value
            continue
        if isinstance(f, Pow):
            b, x = f.base, f.exp
        else:
            b, x = f, ONE
        if b not in bases:
            bases[b] = []
            order.append(b)
        bases[b].append(x)
    if const == 0:
        return ZERO
    out: List[Expr] = []
    for b in order:
        exps = bases[b]
        if len(exps) == 1:
            # factors arrive normalized, so a lone power needs no rework
            out.append(b if _is_const(exps[0], 1) else Pow(b, exps[0]))
            continue
        p = _norm_pow(b, _norm_add(exps))
        if isinstance(p, Mul):
            for g in p.factors:
                if isinstance(g, Const):
                    const *= g.value
                else:
                    out.append(g)
        elif isinstance(p, Const):
            const *= p.value
        else:
            out.append(p)
    if const == 0:
        return ZERO
    out.sort(key=key)
    if not out:
        return Const(const)
    if const != 1:
        out.insert(0, Const(const))
    if len(out) == 1:
        return out[0]
    # a constant times a sum distributes
    if len(out) == 2 and isinstance(out[0], Const) and isinstance(out[1], Add):
        c = out[0].value
        return _norm_add([_norm_mul([Const(c), t]) for t in out[1].terms])
    return Mul(tuple(out))


def _norm_pow(b: Expr, x: Expr) -> Expr:
    if _is_const(x, 0):
        return ONE
    if _is_const(x, 1):
        return b
    if _is_const(b, 0):
        return ZERO
    if _is_const(b, 1):
        return ONE
    if isinstance(b, Pow):
        return _norm_pow(b.base, _norm_mul([b.exp, x]))
    if isinstance(b, Mul):
        return _norm_mul([_norm_pow(f, x) for f in b.factors])
    if isinstance(b, Const):
        folded = _small_const(Pow(b, x)) if isinstance(x, Const) else None
        if folded is not None:
            return folded
        v = b.value
        if v.denominator == 1:
            r, k = _base_root(v.numerator)
            if k > 1:
                return _norm_pow(Const(r), _norm_mul([Const(k), x]))
            return _split_exponent(v.numerator, x)
    return Pow(b, x)


def _split_exponent(base: int, x: Expr) -> Expr:
    """``base^x`` with the constant part of ``x`` peeled off when small."""
    const, terms = linear_form(x)
    if const == 0:
        return Pow(Const(base), x)
    whole = floor(const)
    frac = const - whole
    if whole * base.bit_length() > SMALL_BITS:
        return Pow(Const(base), x)
    rest = from_linear(Fraction(0), terms) if terms else None
    factors: List[Expr] = []
    if whole:
        factors.append(Const(base ** whole))
    if frac:
        factors.append(Pow(Const(base), Const(frac)))
    if rest is not None:
        factors.append(Pow(Const(base), rest))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    # the fractional and symbolic parts of one base stay separate factors
    consts = [f for f in factors if isinstance(f, Const)]
    others = sorted((f for f in factors if not isinstance(f, Const)), key=key)
    return Mul(tuple(consts + others))
