"""Exact evaluation of bound expressions with a digit budget.

Results are ``int`` or ``Fraction``.  ``None`` means the value is irrational
or would exceed the digit limit; sizes are estimated before any big
computation so oversized values are never materialized.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from math import comb, isqrt
from typing import Dict, Optional, Union

from sympy import integer_nthroot

from .expr import Add, Binomial, CentralBinomialMax, Const, Expr, Max, Mul, Pow, PowerDiff, SchurJ, Sub, Surd

__all__ = ["DEFAULT_DIGIT_LIMIT", "ObligationError", "eval_exact", "decimal_digits", "default_digit_limit"]

DEFAULT_DIGIT_LIMIT = 10 ** 6
LOG2_10 = math.log2(10)

Value = Union[int, Fraction]


class ObligationError(ValueError):
    """A guarded subtraction had a right side larger than its left side."""


def default_digit_limit() -> int:
    raw = os.environ.get("TRIBOUND_DIGIT_LIMIT")
    if raw:
        try:
            return max(0, int(raw))
        except ValueError:
            pass
    return DEFAULT_DIGIT_LIMIT


def decimal_digits(n: int) -> int:
    """Number of decimal digits of ``|n|`` without converting to a string."""
    n = abs(n)
    if n == 0:
        return 1
    guess = int((n.bit_length() - 1) / LOG2_10)
    # correct the float estimate by at most a couple of steps
    while 10 ** guess > n:
        guess -= 1
    while 10 ** (guess + 1) <= n:
        guess += 1
    return guess + 1


class _TooBig(Exception):
    pass


class _Irrational(Exception):
    pass


def _bits(v: Value) -> int:
    if isinstance(v, Fraction):
        return max(v.numerator.bit_length(), v.denominator.bit_length())
    return v.bit_length()


def _norm(v) -> Value:
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _exact_root(v: Value, q: int) -> Value:
    v = Fraction(v)
    num, ok1 = integer_nthroot(v.numerator, q)
    den, ok2 = integer_nthroot(v.denominator, q)
    if not (ok1 and ok2):
        raise _Irrational
    return _norm(Fraction(int(num), int(den)))


def _ceil_sqrt_times(v: int, m: int) -> int:
    """``ceil(v * sqrt(m))`` for non-negative integers."""
    n = v * v * m
    r = isqrt(n)
    return r if r * r == n else r + 1


def _powerdiff_parts(k: int, m: Value):
    """``(sqrt(m)+1)^k - (sqrt(m)-1)^k`` as ``a + b*sqrt(m)``."""
    # sum C(k,j) s^j (1 - (-1)^(k-j)); only terms with k-j odd survive
    a = Fraction(0)
    b = Fraction(0)
    for j in range(k + 1):
        if (k - j) % 2 == 1:
            term = 2 * comb(k, j)
            if j % 2 == 0:
                a += term * Fraction(m) ** (j // 2)
            else:
                b += term * Fraction(m) ** ((j - 1) // 2)
    return a, b


class _Evaluator:
    def __init__(self, digit_limit: int):
        self.bit_limit = int(digit_limit * LOG2_10) + 4
        self.memo: Dict[Expr, Value] = {}

    def check(self, bits_estimate: float) -> None:
        if bits_estimate > self.bit_limit:
            raise _TooBig

    def ev(self, e: Expr) -> Value:
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        v = self._ev(e)
        self.check(_bits(v))
        self.memo[e] = v
        return v

    def _ev(self, e: Expr) -> Value:
        if isinstance(e, Const):
            return _norm(e.value)
        if isinstance(e, Add):
            return _norm(sum((Fraction(self.ev(t)) for t in e.terms), Fraction(0)))
        if isinstance(e, Sub):
            a, b = self.ev(e.left), self.ev(e.right)
            if b > a:
                raise ObligationError(f"guarded subtraction went negative: {e}")
            return _norm(Fraction(a) - b)
        if isinstance(e, Mul):
            vals = [self.ev(f) for f in e.factors]
            if any(v == 0 for v in vals):
                return 0
            self.check(sum(_bits(v) for v in vals))
            out = Fraction(1)
            for v in vals:
                out *= v
            return _norm(out)
        if isinstance(e, Max):
            return max(self.ev(i) for i in e.items)
        if isinstance(e, Pow):
            return self._pow(e)
        if isinstance(e, Binomial):
            n, k = self.ev(e.top), self.ev(e.bottom)
            if not (isinstance(n, int) and isinstance(k, int)):
                raise ValueError("binomial arguments must be integers")
            if k < 0 or k > n:
                return 0
            k = min(k, n - k)
            self.check(k * max(1, n.bit_length()))
            return comb(n, k)
        if isinstance(e, CentralBinomialMax):
            m = self.ev(e.top)
            if not isinstance(m, int):
                raise ValueError("central binomial needs an integer")
            self.check(m)
            return comb(m, m // 2)
        if isinstance(e, Surd):
            r = isqrt(e.m)
            if r * r != e.m:
                raise _Irrational
            return e.u + e.v * r
        if isinstance(e, SchurJ):
            m = Fraction(8) * Fraction(self.ev(e.arg))
            self.check(e.k * (_bits(m) / 2 + 2) + e.k.bit_length() + 8)
            a, b = _powerdiff_parts(e.k, m)
            # k even: the rational part vanishes and the value is b*sqrt(m)
            assert a == 0
            if b.denominator != 1 or m.denominator != 1:
                raise _Irrational
            return _ceil_sqrt_times(b.numerator, m.numerator)
        if isinstance(e, PowerDiff):
            s = Fraction(self.ev(e.s))
            self.check(e.k * (_bits(s) + 2) + e.k.bit_length() + 8)
            return _norm((s + 1) ** e.k - (s - 1) ** e.k)
        raise TypeError(type(e).__name__)

    def _pow(self, e: Pow) -> Value:
        b = self.ev(e.base)
        x = self.ev(e.exp)
        x = Fraction(x)
        if b == 0:
            return 0 if x > 0 else 1
        if b == 1 or x == 0:
            return 1
        p, q = x.numerator, x.denominator
        bb = Fraction(b)
        size = max(bb.numerator.bit_length(), bb.denominator.bit_length()) - 1
        # a lower estimate of the result size, so large powers are never built
        self.check(size * abs(p) // q)
        if q != 1:
            bb = Fraction(_exact_root(bb, q))
        return _norm(bb ** p)


def eval_exact(e: Expr, digit_limit: Optional[int] = None) -> Optional[Value]:
    """Exact value of ``e`` or None when irrational or beyond ``digit_limit`` digits."""
    if digit_limit is None:
        digit_limit = default_digit_limit()
    ev = _Evaluator(digit_limit)
    try:
        return ev.ev(e)
    except (_TooBig, _Irrational):
        return None
