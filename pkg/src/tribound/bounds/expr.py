"""Immutable expression trees for exact integer bounds.

Every node denotes a non-negative real number.  Nodes are frozen dataclasses so
they hash and compare structurally, which the normalizer and the structural
comparison rules rely on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

__all__ = [
    "Expr",
    "Const",
    "Add",
    "Sub",
    "Mul",
    "Pow",
    "Binomial",
    "CentralBinomialMax",
    "Surd",
    "SchurJ",
    "PowerDiff",
    "Max",
    "C",
    "as_expr",
    "pretty",
]

Number = Union[int, Fraction]


class Expr:
    """Base class; arithmetic operators build (unnormalized) trees."""

    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __rpow__(self, other):
        return Pow(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __init__(self, value: Number):
        v = Fraction(value)
        if v < 0:
            raise ValueError("bound constants must be non-negative")
        object.__setattr__(self, "value", v)

    def __repr__(self) -> str:
        return f"C({self.value})"


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]

    def children(self):
        return self.terms


@dataclass(frozen=True)
class Sub(Expr):
    """``left - right``; the caller guarantees ``left >= right``."""

    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]

    def children(self):
        return self.factors


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: Expr

    def __init__(self, base, exp):
        object.__setattr__(self, "base", as_expr(base))
        object.__setattr__(self, "exp", as_expr(exp))

    def children(self):
        return (self.base, self.exp)


@dataclass(frozen=True)
class Binomial(Expr):
    top: Expr
    bottom: Expr

    def __init__(self, top, bottom):
        object.__setattr__(self, "top", as_expr(top))
        object.__setattr__(self, "bottom", as_expr(bottom))

    def children(self):
        return (self.top, self.bottom)


@dataclass(frozen=True)
class CentralBinomialMax(Expr):
    """``max_i binom(M, i)``, which is ``binom(M, floor(M/2))``."""

    top: Expr

    def __init__(self, top):
        object.__setattr__(self, "top", as_expr(top))

    def children(self):
        return (self.top,)


@dataclass(frozen=True)
class Surd(Expr):
    """``u + v*sqrt(m)`` with non-negative integers."""

    u: int
    v: int
    m: int

    def __post_init__(self):
        if min(self.u, self.v, self.m) < 0:
            raise ValueError("surd parts must be non-negative")


@dataclass(frozen=True)
class PowerDiff(Expr):
    """``(s+1)^k - (s-1)^k`` for real ``s >= 1`` and integer ``k >= 1``."""

    s: Expr
    k: int

    def __init__(self, s, k: int):
        if k < 1:
            raise ValueError("power must be positive")
        object.__setattr__(self, "s", as_expr(s))
        object.__setattr__(self, "k", int(k))

    def children(self):
        return (self.s,)


@dataclass(frozen=True)
class SchurJ(Expr):
    """Ceiling of ``(sqrt(8a)+1)^k - (sqrt(8a)-1)^k`` with ``k`` even.

    With ``k = 2a^2`` this is Schur's bound on the index of a normal abelian
    subgroup in a finite subgroup of ``GL_a``.
    """

    arg: Expr
    k: int

    def __init__(self, arg, k: int):
        if k < 2 or k % 2:
            raise ValueError("the power in Schur's bound must be even and positive")
        object.__setattr__(self, "arg", as_expr(arg))
        object.__setattr__(self, "k", int(k))

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Max(Expr):
    items: Tuple[Expr, ...]

    def children(self):
        return self.items


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(x)
    raise TypeError(f"cannot use {type(x).__name__} in a bound expression")


def C(x: Number) -> Const:
    return Const(x)


# -- printing ------------------------------------------------------------------

def _atom(e: Expr) -> str:
    s = pretty(e)
    if isinstance(e, (Add, Sub, Mul)) or (isinstance(e, Const) and e.value.denominator != 1):
        return f"({s})"
    if isinstance(e, Pow):
        return f"({s})"
    return s


def _const_str(v: Fraction) -> str:
    if v.denominator == 1:
        n = v.numerator
        if n.bit_length() > 64:
            k = n.bit_length() - 1
            if n == 1 << k:
                return f"2^{k}"
            return f"<{n.bit_length()}-bit integer>"
        return str(n)
    return f"{v.numerator}/{v.denominator}"


def pretty(e: Expr) -> str:
    """Compact one-line rendering with ``^`` for powers."""
    if isinstance(e, Const):
        return _const_str(e.value)
    if isinstance(e, Add):
        return " + ".join(pretty(t) for t in e.terms)
    if isinstance(e, Sub):
        return f"{pretty(e.left)} - {_atom(e.right)}"
    if isinstance(e, Mul):
        return "*".join(_atom(f) for f in e.factors)
    if isinstance(e, Pow):
        ex = e.exp
        ex_s = pretty(ex) if isinstance(ex, Const) and ex.value.denominator == 1 else _atom(ex)
        if isinstance(ex, Pow):
            ex_s = pretty(ex)
            if not isinstance(ex.exp, Const):
                ex_s = f"({ex_s})"
        return f"{_atom(e.base)}^{ex_s}"
    if isinstance(e, Binomial):
        return f"C({pretty(e.top)}, {pretty(e.bottom)})"
    if isinstance(e, CentralBinomialMax):
        return f"maxC({pretty(e.top)})"
    if isinstance(e, Surd):
        return f"{e.u} + {e.v}*sqrt({e.m})"
    if isinstance(e, PowerDiff):
        return f"PD_{e.k}({pretty(e.s)})"
    if isinstance(e, SchurJ):
        return f"J_{e.k}({pretty(e.arg)})"
    if isinstance(e, Max):
        return "max(" + ", ".join(pretty(i) for i in e.items) + ")"
    raise TypeError(type(e).__name__)
