"""Rigorous magnitude enclosures for huge non-negative reals.

A :class:`Big` is a pair ``(level, x)`` with ``x`` an mpmath interval.  It
encloses the value ``2^2^...^x`` with ``level`` twos.  Levels are kept
canonical: level 0 holds values up to ``2^(2^62)``, and higher levels keep
``x.hi`` above ``2^62``.  Every operation returns an interval that contains
the exact result for all inputs inside the operand intervals, so comparisons
that separate are proofs.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional

from mpmath import iv, mpf

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

__all__ = ["Big", "LogProfile", "Undetermined", "magnitude", "big_compare", "precision", "log_profile"]

_LOCK = threading.RLock()
_SMALL_EXACT_DIGITS = 20_000


class Undetermined(ArithmeticError):
    """No enclosure could be produced for a node at this precision."""


@contextmanager
def precision(bits: int):
    """Set the interval working precision (serialized across threads)."""
    with _LOCK:
        old = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = old


def _ival(lo, hi=None):
    return iv.mpf([lo, lo if hi is None else hi])


def _lo(x):
    return x.a


def _hi(x):
    return x.b


def _neg_inf():
    return iv.mpf(["-inf", "-inf"])


def _cap():
    return iv.mpf(2) ** 62


def _huge():
    return iv.mpf(2) ** (iv.mpf(2) ** 62)


def _log2_iv(x):
    lo, hi = x.a, x.b
    if hi <= 0:
        return _neg_inf()
    ln2 = iv.log(iv.mpf(2))
    if lo <= 0:
        top = iv.log(hi) / ln2
        return iv.mpf(["-inf", top.b])
    return iv.log(x) / ln2


def _exp2_iv(x):
    """``2^x`` for an interval; exponents below ``-2^61`` are clamped to a tiny upper bound."""
    lo, hi = x.a, x.b
    if hi == mpf("-inf"):
        return _ival(0)
    if hi > _cap().b:
        raise Undetermined("exponent too large for a level-0 value")
    floor_ = -(mpf(2) ** 61)
    low = mpf(0) if lo < floor_ else (iv.mpf(2) ** lo).a
    high = (iv.mpf(2) ** (hi if hi >= floor_ else floor_)).b
    return iv.mpf([low, high])


@dataclass(frozen=True)
class Big:
    level: int
    x: object  # mpmath ivmpf

    def __repr__(self) -> str:
        return f"Big(level={self.level}, x={self.x})"


def _make(level: int, x) -> Big:
    cap, huge = _cap(), _huge()
    for _ in range(64):
        if x.b > huge.b:
            x = _log2_iv(x)
            level += 1
        elif level > 0 and x.b <= cap.a:
            x = _exp2_iv(x)
            level -= 1
        else:
            return Big(level, x)
    raise Undetermined("level normalization did not settle")


def from_fraction(v) -> Big:
    v = Fraction(v)
    return _make(0, iv.mpf(v.numerator) / iv.mpf(v.denominator))


def zero() -> Big:
    return Big(0, _ival(0))


def _lift(b: Big, level: int):
    x = b.x
    for _ in range(level - b.level):
        x = _log2_iv(x)
    return x


def big_compare(a: Big, b: Big) -> Optional[int]:
    """-1/1 when the enclosures separate, None when they overlap."""
    k = max(a.level, b.level)
    xa, xb = _lift(a, k), _lift(b, k)
    if xa.b < xb.a:
        return -1
    if xa.a > xb.b:
        return 1
    return None


def upper(a: Big) -> Big:
    return Big(a.level, _ival(a.x.b))


def lower(a: Big) -> Big:
    return Big(a.level, _ival(a.x.a))


def span(lo: Big, hi: Big) -> Big:
    """Enclosure from the lower end of ``lo`` to the upper end of ``hi``."""
    k = max(lo.level, hi.level)
    a, b = _lift(lo, k), _lift(hi, k)
    if a.a > b.b:
        raise Undetermined("inverted span")
    return _make(k, iv.mpf([a.a, b.b]))


def hull(a: Big, b: Big) -> Big:
    k = max(a.level, b.level)
    xa, xb = _lift(a, k), _lift(b, k)
    return _make(k, iv.mpf([min(xa.a, xb.a), max(xa.b, xb.b)]))


def bmax(a: Big, b: Big) -> Big:
    k = max(a.level, b.level)
    xa, xb = _lift(a, k), _lift(b, k)
    return _make(k, iv.mpf([max(xa.a, xb.a), max(xa.b, xb.b)]))


def log2(a: Big) -> Big:
    if a.level == 0:
        return _make(0, _log2_iv(a.x))
    return _make(a.level - 1, a.x)


def exp2(a: Big) -> Big:
    if a.level == 0 and a.x.b <= _cap().a:
        return _make(0, _exp2_iv(a.x))
    return _make(a.level + 1, a.x)


def shift(a: Big, c) -> Big:
    """Add the level-0 interval ``c`` (any sign, small relative to ``a``)."""
    if a.level == 0:
        return _make(0, a.x + c)
    cm = max(abs(c.a), abs(c.b))
    if cm == 0:
        return a
    x = a.x
    if a.level == 1:
        # need |c| <= value/2, i.e. log2|c| + 1 <= x.lo
        lc = _log2_iv(_ival(cm))
        if not (lc.b + 1 <= x.a):
            raise Undetermined("additive term is not small")
        eps = (2 * _ival(cm) * _exp2_iv(_ival(-x.a))).b
    else:
        if not (x.a >= 63):
            raise Undetermined("tower too shallow for a crude shift")
        eps = (iv.mpf(2) ** (-(iv.mpf(2) ** 61))).b
    return _make(a.level, x + iv.mpf([-eps, eps]))


def add(a: Big, b: Big) -> Big:
    """Sum of two non-negative enclosures."""
    if a.level == 0 and b.level == 0:
        return _make(0, a.x + b.x)
    if a.level < b.level:
        a, b = b, a
    if b.level == 0:
        if b.x.b <= 0:
            return a
        try:
            return shift(a, b.x)
        except Undetermined:
            pass
    la, lb = log2(a), log2(b)
    c = big_compare(la, lb)
    if c is not None:
        big, small = (la, lb) if c > 0 else (lb, la)
        if big.level == 0 and small.level == 0:
            d = small.x - big.x
            t = _log2_iv(1 + _exp2_iv(d))
            res = _make(0, big.x + t)
        else:
            res = shift(big, iv.mpf([0, 1]))
    else:
        res = shift(bmax(la, lb), iv.mpf([0, 1]))
    return exp2(res)


def add_signed(a: Big, b: Big) -> Big:
    """Sum where level-0 operands may be negative (used in log space)."""
    if a.level == 0 and b.level == 0:
        return _make(0, a.x + b.x)
    if a.level == 0:
        a, b = b, a
    if b.level >= 1 or b.x.a >= 0:
        return add(a, b)
    return shift(a, b.x)


def neg_small(a: Big) -> Big:
    if a.level != 0:
        raise Undetermined("cannot negate a tower")
    return Big(0, -a.x)


def mul(a: Big, b: Big) -> Big:
    if a.level == 0 and b.level == 0:
        return _make(0, a.x * b.x)
    for z in (a, b):
        if z.level == 0 and z.x.b <= 0:
            return zero()
    if (a.level == 0 and a.x.a <= 0) or (b.level == 0 and b.x.a <= 0):
        return hull(zero(), mul(upper(a), upper(b)))
    return exp2(add_signed(log2(a), log2(b)))


def reciprocal_small(a: Big) -> Big:
    """``1/a`` for ``a`` whose logarithm is level 0."""
    la = log2(a)
    if la.level != 0:
        raise Undetermined("reciprocal of a tower")
    return exp2(Big(0, -la.x))


def power(base: Big, e: Big) -> Big:
    """``base^e`` for non-negative ``base`` and ``e``."""
    if base.level == 0 and base.x.b <= 0:
        return zero() if (e.level > 0 or e.x.a > 0) else hull(zero(), from_fraction(1))
    lb = log2(base)
    if lb.level == 0 and lb.x.b <= 0:
        return Big(0, iv.mpf([0, 1]))
    if lb.level == 0 and lb.x.a < 0:
        return hull(Big(0, iv.mpf([0, 1])), power(upper(base), e))
    return exp2(mul(e, lb))


def sub_small(a: Big, b: Big) -> Big:
    """``a - b`` assuming ``b <= a/2``."""
    if a.level == 0 and b.level == 0:
        x = a.x - b.x
        return _make(0, iv.mpf([max(x.a, 0), x.b]))
    if b.level == 0:
        try:
            return shift(a, -b.x)
        except Undetermined:
            pass
    return exp2(shift(log2(a), iv.mpf([-1, 0])))


def _const_big(v) -> Big:
    return from_fraction(Fraction(v))


def _iv_from_big(b: Big):
    if b.level != 0:
        raise Undetermined("expected a level-0 value")
    return b.x


class _Magnitude:
    def __init__(self):
        self.memo: Dict[Expr, Big] = {}

    def of(self, e: Expr) -> Big:
        hit = self.memo.get(e)
        if hit is None:
            hit = self._of(e)
            self.memo[e] = hit
        return hit

    def _exact_small(self, e: Expr):
        return eval_exact(e, _SMALL_EXACT_DIGITS)

    def _of(self, e: Expr) -> Big:
        if isinstance(e, Const):
            return from_fraction(e.value)
        v = eval_exact(e, 64)
        if v is not None:
            return from_fraction(v)
        if isinstance(e, Add):
            acc = zero()
            for t in e.terms:
                acc = add(acc, self.of(t))
            return acc
        if isinstance(e, Mul):
            acc = from_fraction(1)
            for f in e.factors:
                acc = mul(acc, self.of(f))
            return acc
        if isinstance(e, Max):
            items = [self.of(i) for i in e.items]
            acc = items[0]
            for it in items[1:]:
                acc = bmax(acc, it)
            return acc
        if isinstance(e, Sub):
            a, b = self.of(e.left), self.of(e.right)
            if a.level == 0 and b.level == 0:
                return sub_small(a, b)
            if big_compare(mul(b, from_fraction(2)), a) == -1:
                return sub_small(a, b)
            raise Undetermined("subtraction of comparable towers")
        if isinstance(e, Pow):
            v = self._exact_small(e) if self._cheap_pow(e) else None
            if v is not None:
                return from_fraction(v)
            return power(self.of(e.base), self.of(e.exp))
        if isinstance(e, Surd):
            return _make(0, e.u + e.v * iv.sqrt(iv.mpf(e.m)))
        if isinstance(e, Binomial):
            return self._binomial(e)
        if isinstance(e, CentralBinomialMax):
            return self._cbm(e)
        if isinstance(e, (SchurJ, PowerDiff)):
            return self._powerdiff(e)
        raise TypeError(type(e).__name__)

    @staticmethod
    def _cheap_pow(e: Pow) -> bool:
        b, x = eval_exact(e.base, 64), eval_exact(e.exp, 64)
        if b is None or x is None:
            return False
        b = Fraction(b)
        size = max(b.numerator.bit_length(), b.denominator.bit_length())
        return size * abs(Fraction(x)) <= 65536

    def _binomial(self, e: Binomial) -> Big:
        v = eval_exact(e, _SMALL_EXACT_DIGITS)
        if v is not None:
            return from_fraction(v)
        from .normalize import difference

        k = eval_exact(e.bottom, 64)
        n_exact = eval_exact(e.top, _SMALL_EXACT_DIGITS)
        kk = None
        if k is not None and n_exact is not None:
            kk = min(k, n_exact - k)
        else:
            d = difference(e.top, e.bottom)
            dv = eval_exact(d, 64) if d is not None else None
            if dv is not None and (k is None or dv < k):
                kk = dv
            elif k is not None:
                kk = k
        if kk is None or kk < 0 or kk > 4096:
            raise Undetermined("binomial without a small lower index")
        kk = int(kk)
        if kk == 0:
            return from_fraction(1)
        N = self.of(e.top)
        inv_fact = from_fraction(Fraction(1, factorial(kk)))
        hi = mul(power(N, from_fraction(kk)), inv_fact)
        low_base = shift(N, _ival(-(kk - 1))) if N.level > 0 else _make(0, N.x - (kk - 1))
        lo = mul(power(low_base, from_fraction(kk)), inv_fact)
        return span(lo, hi)

    def _cbm(self, e: CentralBinomialMax) -> Big:
        m = eval_exact(e.top, 64)
        if m is not None and m <= 60_000:
            from math import comb

            return from_fraction(comb(int(m), int(m) // 2))
        M = self.of(e.top)
        two_m = exp2(M)
        # 2^M/(M+1) <= binom(M, M//2) <= 2^M / sqrt(1.5 (M-1))
        m1 = add(M, from_fraction(1))
        lm1 = log2(m1)
        if lm1.level == 0:
            lo = exp2(add_signed(M, Big(0, -lm1.x)))
        else:
            lo = exp2(sub_small(M, lm1))
        m_minus = sub_small(M, from_fraction(1))
        lhalf = log2(mul(m_minus, from_fraction(Fraction(3, 2))))
        half = mul(lhalf, from_fraction(Fraction(1, 2)))
        if half.level == 0:
            hi = exp2(add_signed(M, Big(0, -half.x)))
        else:
            hi = two_m
        return span(lo, hi)

    def _powerdiff(self, e) -> Big:
        k = e.k
        if isinstance(e, SchurJ):
            s = power(mul(from_fraction(8), self.of(e.arg)), from_fraction(Fraction(1, 2)))
        else:
            s = self.of(e.s)
        ceiling = isinstance(e, SchurJ)
        if s.level == 0 and s.x.b <= 2 ** 20:
            x = s.x
            v = (x + 1) ** k - (x - 1) ** k
            lo, hi = max(v.a, 0), v.b
            if ceiling:
                hi = (iv.mpf(hi) + 1).b
            return _make(0, iv.mpf([lo, hi]))
        # mean value theorem: 2k xi^(k-1) with xi in (s-1, s+1)
        two_k = from_fraction(2 * k)
        km1 = from_fraction(k - 1)
        lo = mul(two_k, power(sub_small(s, from_fraction(1)), km1))
        hi = mul(two_k, power(add(s, from_fraction(1)), km1))
        if ceiling:
            hi = add(hi, from_fraction(1))
        return span(lo, hi)


def magnitude(e: Expr, bits: int = 64) -> Big:
    """Enclosure of ``e`` at ``bits`` of interval precision."""
    with precision(bits):
        return _Magnitude().of(e)


@dataclass(frozen=True)
class LogProfile:
    """Iterated base-2 logarithm depth and the enclosure at that depth."""

    depth: int
    lo: Fraction
    hi: Fraction

    def __str__(self) -> str:
        return f"log2^{self.depth} in [{float(self.lo):.6g}, {float(self.hi):.6g}]"


def log_profile(e: Expr, bits: int = 64) -> LogProfile:
    """Lift the enclosure until its upper end is below ``2^64``."""
    with precision(bits):
        b = _Magnitude().of(e)
        depth = b.level
        x = b.x
        while x.b > iv.mpf(2) ** 64:
            x = _log2_iv(x)
            depth += 1

        def frac(p):
            v = mpf(p)
            if v in (mpf("inf"), mpf("-inf")):
                raise Undetermined("unbounded enclosure")
            m, ex = v.man_exp
            return Fraction(int(m)) * (Fraction(2) ** ex)

        return LogProfile(depth, frac(x.a), frac(x.b))
