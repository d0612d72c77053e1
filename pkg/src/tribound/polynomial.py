"""Sparse multivariate polynomials over Q with a fixed variable order.

Variables are ordered ``x_1 < x_2 < ... < x_n`` by their position in a
:class:`VariableOrder`.  Terms are stored as a map from exponent tuples to
nonzero :class:`fractions.Fraction` coefficients.  The monomial order used for
printing and tie-breaking is pure lex with ``x_n`` most significant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

__all__ = [
    "OrderMismatchError",
    "NotTriangularError",
    "VariableOrder",
    "Polynomial",
    "PseudoDivisionResult",
    "class_of",
    "initial",
    "pseudo_divide",
    "prem",
    "prem_var",
    "content_in",
    "poly_gcd",
]

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class OrderMismatchError(ValueError):
    """Operands were built against different variable orders."""


class NotTriangularError(ValueError):
    """A divisor list does not have strictly increasing classes."""


@dataclass(frozen=True)
class VariableOrder:
    """Ascending variable order; ``names[0]`` is the lowest variable."""

    names: Tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(str(n).strip() for n in names)
        if any(not n for n in names):
            raise ValueError("variable names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> "Polynomial":
        return Polynomial.variable(self, self.index(name))

    def gens(self) -> List["Polynomial"]:
        return [Polynomial.variable(self, i) for i in range(len(self))]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c: Scalar) -> "Polynomial":
        return Polynomial.constant(self, c)

    def parse(self, text: str) -> "Polynomial":
        from .textio import parse_polynomial

        return parse_polynomial(text, self)

    def __str__(self) -> str:
        return ",".join(self.names)


def _lex_key(e: Exponent) -> Exponent:
    return e[::-1]


class Polynomial:
    """An immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("order", "terms", "_hash")

    def __init__(self, order: VariableOrder, terms: Mapping[Exponent, Scalar], *, _clean: bool = False):
        self.order = order
        if _clean:
            self.terms = terms
        else:
            n = len(order)
            clean: Dict[Exponent, Fraction] = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match {n} variables")
                if c:
                    clean[tuple(e)] = Fraction(c)
            self.terms = clean
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, order: VariableOrder, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return cls(order, {}, _clean=True)
        return cls(order, {(0,) * len(order): c}, _clean=True)

    @classmethod
    def variable(cls, order: VariableOrder, i: int) -> "Polynomial":
        e = [0] * len(order)
        e[i] = 1
        return cls(order, {tuple(e): Fraction(1)}, _clean=True)

    def _new(self, terms: Dict[Exponent, Fraction]) -> "Polynomial":
        return Polynomial(self.order, terms, _clean=True)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.order is not self.order and other.order != self.order:
                raise OrderMismatchError(f"variable orders differ: ({self.order}) vs ({other.order})")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Polynomial.constant(self.order, Fraction(other))
        return NotImplemented

    # -- basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.order)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, i: int) -> int:
        """Degree in variable ``i``; -1 for the zero polynomial."""
        return max((e[i] for e in self.terms), default=-1)

    def class_index(self) -> int:
        """Index of the highest variable present; -1 for constants."""
        top = -1
        for e in self.terms:
            for i in range(len(e) - 1, top, -1):
                if e[i]:
                    top = i
                    break
        return top

    def variables(self) -> List[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        e = max(self.terms, key=_lex_key)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self._new({})
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return self._new({})
        return self._new({e: v * c for e, v in self.terms.items()})

    def mul_monomial(self, e: Exponent, c: Scalar = 1) -> "Polynomial":
        c = Fraction(c)
        return self._new({tuple(a + b for a, b in zip(k, e)): v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.order == other.order and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.order, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order.names, frozenset(self.terms.items())))
        return self._hash

    # -- univariate views --------------------------------------------------
    def coefficients_in(self, i: int) -> Dict[int, "Polynomial"]:
        """Split into ``{k: coeff}`` with ``self = sum coeff * x_i^k``."""
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[e] = c
        return {k: self._new(t) for k, t in parts.items()}

    def coefficient(self, i: int, k: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return self._new(out)

    def leading_coefficient(self, i: int) -> "Polynomial":
        """Coefficient of the highest power of ``x_i``."""
        return self.coefficient(i, self.degree(i))

    def tail(self, i: int) -> "Polynomial":
        """``self`` minus its leading part in ``x_i``."""
        d = self.degree(i)
        return self._new({e: c for e, c in self.terms.items() if e[i] != d})

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return self._new(out)

    # -- normalization -----------------------------------------------------
    def monic(self) -> "Polynomial":
        """Scale so the lex-leading coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self if c == 1 else self.scale(1 / c)

    def primitive(self) -> "Polynomial":
        """Integer primitive part with positive lex-leading coefficient."""
        if not self.terms:
            return self
        den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.terms.values()), 1)
        num = reduce(gcd, (int(c * den) for c in self.terms.values()), 0)
        _, lc = self.leading_term()
        s = Fraction(den, num) if lc > 0 else Fraction(-den, num)
        return self if s == 1 else self.scale(s)

    # -- evaluation and substitution ---------------------------------------
    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def substitute(self, values: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace ``x_i`` by ``values[i]`` (polynomials over any order)."""
        if not values:
            return self
        target = next(iter(values.values())).order
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def pw(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in powers:
                powers[key] = values[i] ** k
            return powers[key]

        result = Polynomial(target, {}, _clean=True)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            rest = [0] * len(target)
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in values:
                    term = term * pw(i, k)
                else:
                    if target != self.order:
                        raise OrderMismatchError("unsubstituted variable in a different order")
                    rest[i] = k
            if any(rest):
                term = term.mul_monomial(tuple(rest))
            result = result + term
        return result

    def reorder(self, order: VariableOrder) -> "Polynomial":
        """Re-express over ``order``, matching variables by name.

        Variables missing from ``order`` may be dropped only if unused.
        """
        pos = [order.names.index(name) if name in order.names else None for name in self.order.names]
        n = len(order)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise KeyError(f"unknown variable {self.order.names[i]!r}")
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return Polynomial(order, out, _clean=True)

    # -- printing ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.order.names
        parts = []
        for e in sorted(self.terms, key=_lex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


# -- class / initial --------------------------------------------------------

def class_of(f: Polynomial) -> Optional[str]:
    """Name of the highest variable occurring in ``f``, or None for constants."""
    i = f.class_index()
    return None if i < 0 else f.order.names[i]


def initial(g: Polynomial) -> Polynomial:
    """Leading coefficient of ``g`` as a univariate polynomial in its class."""
    i = g.class_index()
    if i < 0:
        raise ValueError("the initial of a constant is undefined")
    return g.leading_coefficient(i)


# -- pseudo-division ---------------------------------------------------------

def exact_quotient(a: Polynomial, b: Polynomial) -> Optional[Polynomial]:
    """Return ``a / b`` when ``b`` divides ``a`` exactly, else None."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    eb, cb = b.leading_term()
    q: Dict[Exponent, Fraction] = {}
    r = a
    while r.terms:
        er, cr = r.leading_term()
        diff = tuple(x - y for x, y in zip(er, eb))
        if any(d < 0 for d in diff):
            return None
        c = cr / cb
        q[diff] = q.get(diff, 0) + c
        r = r - b.mul_monomial(diff, c)
    return Polynomial(a.order, {e: c for e, c in q.items() if c}, _clean=True)


def content_in(p: Polynomial, i: int) -> Polynomial:
    """Gcd of the coefficients of ``p`` viewed as a polynomial in ``x_i``."""
    g = Polynomial.constant(p.order, 0)
    for c in p.coefficients_in(i).values():
        g = poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Gcd over the rationals, normalized by ``primitive``; recursive primitive remainder sequences."""
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(a.order, 1)
    v = max(a.class_index(), b.class_index())
    if a.degree(v) == 0:
        return poly_gcd(a, content_in(b, v))
    if b.degree(v) == 0:
        return poly_gcd(content_in(a, v), b)
    ca, cb = content_in(a, v), content_in(b, v)
    c = poly_gcd(ca, cb)
    f, g = exact_quotient(a, ca), exact_quotient(b, cb)
    if f.degree(v) < g.degree(v):
        f, g = g, f
    while not g.is_zero() and g.degree(v) > 0:
        _, r, _ = prem_var(f, g, v)
        if r.is_zero():
            break
        f, g = g, exact_quotient(r, content_in(r, v)) if r.degree(v) > 0 else r
    if g.is_zero() or g.degree(v) > 0:
        return (c * exact_quotient(g, content_in(g, v))).primitive()
    return c.primitive()


def prem_var(f: Polynomial, g: Polynomial, i: int) -> Tuple[Polynomial, Polynomial, int]:
    """Pseudo-divide ``f`` by ``g`` in variable ``x_i``.

    Returns ``(q, r, alpha)`` with ``lc(g)^alpha * f = q*g + r`` and
    ``deg_i(r) < deg_i(g)``.  ``alpha`` counts only the steps where the
    initial actually had to be multiplied in.
    """
    d = g.degree(i)
    if d <= 0:
        raise ValueError("divisor does not involve the division variable")
    lc = g.leading_coefficient(i)
    lc_const = lc.is_constant()
    order = f.order
    q = Polynomial(order, {}, _clean=True)
    r = f
    alpha = 0
    unit = [0] * len(order)
    while True:
        k = r.degree(i)
        if k < d:
            break
        lr = r.leading_coefficient(i)
        shift = list(unit)
        shift[i] = k - d
        shift = tuple(shift)
        if lc_const:
            t = lr.scale(1 / lc.constant_value())
        else:
            t = exact_quotient(lr, lc)
            if t is None:
                r = r * lc
                q = q * lc
                alpha += 1
                t = lr
        t = t.mul_monomial(shift)
        q = q + t
        r = r - t * g
    return q, r, alpha


@dataclass(frozen=True)
class PseudoDivisionResult:
    quotients: List[Polynomial]
    remainder: Polynomial
    initial_exponents: List[int]
    divisors: List[Polynomial] = field(default_factory=list)

    def check(self, f: Polynomial) -> bool:
        """Re-expand ``prod lc(g_i)^a_i * f == sum q_i g_i + f_0``."""
        lhs = f
        for g, a in zip(self.divisors, self.initial_exponents):
            if a:
                lhs = lhs * initial(g) ** a
        rhs = self.remainder
        for q, g in zip(self.quotients, self.divisors):
            rhs = rhs + q * g
        return lhs == rhs


def _check_triangular(G: Sequence[Polynomial], order: VariableOrder) -> None:
    last = -1
    for g in G:
        if g.order != order:
            raise OrderMismatchError("divisor built against a different variable order")
        c = g.class_index()
        if c < 0:
            raise NotTriangularError(f"constant member {g} in divisor set")
        if c <= last:
            raise NotTriangularError("classes of the divisor set must strictly increase")
        last = c


def pseudo_divide(f: Polynomial, G: Sequence[Polynomial]) -> PseudoDivisionResult:
    """Pseudo-divide ``f`` by the triangular set ``G``, highest class first."""
    G = list(G)
    _check_triangular(G, f.order)
    m = len(G)
    quotients: List[Optional[Polynomial]] = [None] * m
    alphas = [0] * m
    r = f
    for j in range(m - 1, -1, -1):
        g = G[j]
        i = g.class_index()
        if r.degree(i) < g.degree(i):
            quotients[j] = f.order.zero()
            continue
        q, r, a = prem_var(r, g, i)
        if a:
            lc_pow = g.leading_coefficient(i) ** a
            for k in range(j + 1, m):
                quotients[k] = quotients[k] * lc_pow
        quotients[j] = q
        alphas[j] = a
    return PseudoDivisionResult(list(quotients), r, alphas, G)


def prem(f: Polynomial, G: Sequence[Polynomial]) -> Polynomial:
    """Pseudo-remainder of ``f`` by the triangular set ``G``."""
    G = list(G)
    _check_triangular(G, f.order)
    return prem_unchecked(f, G)


def prem_unchecked(f: Polynomial, G: Sequence[Polynomial]) -> Polynomial:
    r = f
    for g in reversed(G):
        if r.is_zero():
            break
        i = g.class_index()
        if r.degree(i) >= g.degree(i):
            r = prem_var(r, g, i)[1]
    return r
