"""Deciding ``a < b``, ``a = b`` or ``a > b`` for bound expressions.

Three engines are tried in order:

1. exact integer or rational evaluation when both sides fit the digit limit;
2. interval enclosures of iterated logarithms at increasing precision;
3. structural rewriting on normalized trees (cancelling common terms and
   factors, comparing exponents of a shared base, taking roots, and
   monotonicity facts about central binomials and Schur-type bounds).

Each engine is sound on its own, so a verdict is only returned when one of them
proves it.  Otherwise :class:`Undecided` is raised.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from mpmath import iv, mpf
from typing import Dict, Optional, Tuple, Union

from .exact import eval_exact
from .expr import CentralBinomialMax, Const, Expr, Mul, Pow, PowerDiff, SchurJ, Sub, Add, as_expr, pretty
from .magnitude import Undetermined, big_compare, magnitude, precision
from .normalize import difference, from_linear, from_power, linear_form, norm, power_form

__all__ = ["Undecided", "compare", "leq", "verdict", "LT", "EQ", "GT", "LE", "GE", "PRECISIONS"]

LT, EQ, GT = -1, 0, 1
# one-sided verdicts: proven a <= b (resp. a >= b) but equality not ruled out
LE, GE = "le", "ge"

Verdict = Union[int, str]

PRECISIONS = (64, 256, 1024, 4096)
MAX_DEPTH = 30

_FLIP = {LT: GT, GT: LT, EQ: EQ, LE: GE, GE: LE, None: None}
_AT_MOST = (LT, EQ, LE)
_AT_LEAST = (GT, EQ, GE)


class Undecided(ArithmeticError):
    """No engine could settle the comparison."""

    def __init__(self, a: Expr, b: Expr, partial: Optional[Verdict] = None):
        self.partial = partial
        msg = f"cannot decide {pretty(a)} vs {pretty(b)}"
        if partial is not None:
            msg += f" (only {'<=' if partial == LE else '>='} is proven)"
        super().__init__(msg)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class _Comparer:
    def __init__(self, digit_limit: Optional[int]):
        self.digit_limit = digit_limit
        self.exact: Dict[Expr, object] = {}
        self.memo: Dict[Tuple[Expr, Expr], Optional[Verdict]] = {}

    def value(self, e: Expr):
        if e not in self.exact:
            self.exact[e] = eval_exact(e, self.digit_limit)
        return self.exact[e]

    def cmp(self, a: Expr, b: Expr, depth: int = 0) -> Optional[Verdict]:
        if a == b:
            return EQ
        pair = (a, b)
        if pair in self.memo:
            return self.memo[pair]
        if depth > MAX_DEPTH:
            return None
        self.memo[pair] = None  # guards against rewriting cycles
        out = self._cmp(a, b, depth)
        self.memo[pair] = out
        return out

    def _cmp(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        va, vb = self.value(a), self.value(b)
        if va is not None and vb is not None:
            return _sign(va - vb)
        for bits in PRECISIONS:
            try:
                c = big_compare(magnitude(a, bits), magnitude(b, bits))
            except Undetermined:
                break
            if c is not None:
                return c
        na, nb = norm(a), norm(b)
        if na == nb:
            return EQ
        partial = None
        for rule in (self._linear, self._common_factors, self._same_base, self._roots,
                     self._central_binomial, self._monotone):
            v = rule(na, nb, depth + 1)
            if v in (LT, EQ, GT):
                return v
            if v is not None and partial is None:
                partial = v
        return partial

    # -- structural rules ---------------------------------------------------

    def _linear(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """Cancel shared terms of two sums."""
        ca, ta = linear_form(a)
        cb, tb = linear_form(b)
        if not (set(ta) & set(tb)) and not (ca and cb):
            return None
        const = ca - cb
        terms = dict(ta)
        for t, c in tb.items():
            terms[t] = terms.get(t, 0) - c
        pos = {t: c for t, c in terms.items() if c > 0}
        neg = {t: -c for t, c in terms.items() if c < 0}
        A = from_linear(max(const, Fraction(0)), pos)
        B = from_linear(max(-const, Fraction(0)), neg)
        if (A, B) == (a, b):
            return None
        return self.cmp(A, B, depth)

    def _common_factors(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """Divide both sides by a common power-product."""
        ca, pa = power_form(a)
        cb, pb = power_form(b)
        changed = False
        for base in set(pa) & set(pb):
            xa, xb = pa[base], pb[base]
            if xa == xb:
                del pa[base], pb[base]
                changed = True
                continue
            d = difference(xa, xb)
            if d is not None:
                pa[base] = d
                del pb[base]
                changed = True
                continue
            d = difference(xb, xa)
            if d is not None:
                pb[base] = d
                del pa[base]
                changed = True
        if not changed:
            return None
        return self.cmp(from_power(ca, pa), from_power(cb, pb), depth)

    def _same_base(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """``c1 * B^E1`` against ``c2 * B^E2`` for an integer base ``B``.

        The cofactors ``c1``, ``c2`` may be products of constant powers; their
        base-``B`` logarithms are then enclosed in intervals.
        """
        ca, pa = power_form(a)
        cb, pb = power_form(b)
        if ca == 0 or cb == 0:
            return None
        symbolic = {base for base, x in list(pa.items()) + list(pb.items()) if not isinstance(x, Const)}
        if len(symbolic) > 1:
            return None
        if symbolic:
            base = next(iter(symbolic))
        else:
            ints = [bs for bs in set(pa) | set(pb) if isinstance(bs, Const)]
            if len(ints) != 1:
                return None
            base = ints[0]
        if not (isinstance(base, Const) and base.value.denominator == 1 and base.value >= 2):
            return None
        rest_a = {bs: x for bs, x in pa.items() if bs != base}
        rest_b = {bs: x for bs, x in pb.items() if bs != base}
        if not all(isinstance(bs, Const) for bs in list(rest_a) + list(rest_b)):
            return None
        B = base.value.numerator
        Ea = pa.get(base, Const(0))
        Eb = pb.get(base, Const(0))

        def shifted(j: int) -> Optional[Verdict]:
            # compare Ea - Eb against j
            left = norm(Add((Ea, Const(max(-j, 0)))))
            right = norm(Add((Eb, Const(max(j, 0)))))
            return self.cmp(left, right, depth)

        if not rest_a and not rest_b:
            ratio = cb / ca
            k = _floor_log(ratio, B)
            if Fraction(B) ** k == ratio:
                return shifted(k)
            lo, hi = Fraction(k), Fraction(k + 1)
        else:
            # log_B(cofactor_b / cofactor_a) lies in [lo, hi]
            enc = _log_enclosure(cb, rest_b, B) - _log_enclosure(ca, rest_a, B)
            lo, hi = _to_fraction(enc.a), _to_fraction(enc.b)
            if lo is None or hi is None:
                return None
        # Ea - Eb <= floor(lo) < log ratio gives a < b; Ea - Eb >= ceil(hi) gives a > b
        k_lo = floor(lo)
        if k_lo < lo or (not rest_a and not rest_b):
            if shifted(k_lo) in _AT_MOST:
                return LT
        k_hi = ceil(hi)
        if k_hi > hi or (not rest_a and not rest_b):
            if shifted(k_hi) in _AT_LEAST:
                return GT
        return None

    def _roots(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """Take the r-th root of both sides when one is visibly an r-th power."""
        r = _root_candidate(a) or _root_candidate(b)
        if r is None:
            return None
        ca, pa = power_form(a)
        cb, pb = power_form(b)
        if ca == 0:
            return None
        # move the constants to one side first so their roots can merge with powers
        inv = Const(1 / r)
        A = norm(Pow(from_power(Fraction(1), pa), inv))
        B = norm(Pow(from_power(cb / ca, pb), inv))
        if (A, B) == (a, b):
            return None
        return self.cmp(A, B, depth)

    def _central_binomial(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        v = self._cbm_below(a, b, depth)
        if v is not None:
            return v
        return _FLIP[self._cbm_below(b, a, depth)]

    def _cbm_below(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """Prove ``c1 * maxC(M) < c2 * 2^E``.

        Uses ``maxC(M) < 2^M`` and ``maxC(M) < 2^M / sqrt(1.5 (M - 1))``.
        """
        ca, pa = power_form(a)
        cb, pb = power_form(b)
        if len(pa) != 1 or ca == 0:
            return None
        (cbm, x), = pa.items()
        if not (isinstance(cbm, CentralBinomialMax) and x == Const(1)):
            return None
        if any(base != Const(2) for base in pb):
            return None
        M = cbm.top
        E = pb.get(Const(2), Const(0))
        rho = cb / ca
        delta = _const_difference(M, E)
        if delta is None:
            if rho >= 1 and self.cmp(M, E, depth) in _AT_MOST:
                return LT
            return None
        if abs(delta) > 4096:
            return None
        # need maxC(M) < rho * 2^(M - delta)
        if rho >= Fraction(2) ** ceil(delta):
            return LT
        if self.cmp(M, Const(2), depth) not in _AT_LEAST:
            return None
        need = norm(Mul((Pow(Const(4), Const(delta)), Const(1 / (rho * rho)))))
        have = norm(Mul((Const(Fraction(3, 2)), Sub(M, Const(1)))))
        if self.cmp(need, have, depth) in _AT_MOST:
            return LT
        return None

    def _monotone(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        if isinstance(a, SchurJ) and isinstance(b, SchurJ) and a.k == b.k:
            v = self.cmp(a.arg, b.arg, depth)
            # the ceiling can merge nearby values, so only weak verdicts survive
            return {LT: LE, GT: GE}.get(v, v)
        if isinstance(a, PowerDiff) and isinstance(b, PowerDiff) and a.k == b.k:
            return self.cmp(a.s, b.s, depth)
        v = self._schur_below(a, b, depth)
        if v is not None:
            return v
        return _FLIP[self._schur_below(b, a, depth)]

    def _schur_below(self, a: Expr, b: Expr, depth: int) -> Optional[Verdict]:
        """Upper bounds for Schur-type values against other expressions."""
        if isinstance(a, SchurJ) and isinstance(b, PowerDiff) and a.k == b.k:
            # PD grows with slope at least 2k, so S >= 2 sqrt(8A) leaves a gap above the ceiling
            lhs = norm(Mul((Const(32), a.arg)))
            rhs = norm(Pow(b.s, Const(2)))
            if self.cmp(lhs, rhs, depth) in _AT_MOST and self.cmp(a.arg, Const(1), depth) in _AT_LEAST:
                return LT
            return None
        if isinstance(b, (SchurJ, PowerDiff)):
            return None
        if isinstance(a, PowerDiff):
            s = a.s
        elif isinstance(a, SchurJ):
            s = norm(Pow(Mul((Const(8), a.arg)), Const(Fraction(1, 2))))
            if self.cmp(s, Const(2), depth) not in _AT_LEAST:
                return None
        else:
            return None
        # value < (s + 1)^k, and for the ceiling (s - 1)^k > 1 absorbs the rounding
        root = norm(Pow(b, Const(Fraction(1, a.k))))
        if self.cmp(norm(Add((s, Const(1)))), root, depth) in _AT_MOST:
            return LT
        return None


def _log_enclosure(c: Fraction, factors: Dict[Expr, Expr], base: int):
    """Interval for ``log_base(c * prod(f^x))`` with constant ``f`` and ``x``."""
    with precision(256):
        acc = iv.log(iv.mpf(c.numerator)) - iv.log(iv.mpf(c.denominator))
        for f, x in factors.items():
            v, e = f.value, x.value
            acc += (iv.mpf(e.numerator) / e.denominator) * (iv.log(iv.mpf(v.numerator)) - iv.log(iv.mpf(v.denominator)))
        return acc / iv.log(iv.mpf(base))


def _to_fraction(p) -> Optional[Fraction]:
    v = mpf(p)
    if v != v or v in (mpf("inf"), mpf("-inf")):
        return None
    m, e = v.man_exp
    return Fraction(int(m)) * Fraction(2) ** int(e)


def _floor_log(r: Fraction, base: int) -> int:
    """Largest ``k`` with ``base^k <= r`` for ``r > 0``."""
    est = (r.numerator.bit_length() - r.denominator.bit_length()) // max(1, base.bit_length() - 1)
    k = est
    while Fraction(base) ** k > r:
        k -= 1
    while Fraction(base) ** (k + 1) <= r:
        k += 1
    return k


def _const_difference(M: Expr, E: Expr) -> Optional[Fraction]:
    """``M - E`` when it is a constant (of either sign)."""
    cm, tm = linear_form(norm(M))
    ce, te = linear_form(norm(E))
    if tm != te:
        return None
    return cm - ce


def _root_candidate(e: Expr) -> Optional[Fraction]:
    _, bases = power_form(e)
    for base, x in bases.items():
        if not isinstance(base, Const) and isinstance(x, Const) and x.value > 1:
            return x.value
    return None


def verdict(a, b, digit_limit: Optional[int] = None) -> Optional[Verdict]:
    """Raw verdict, possibly one-sided (``LE``/``GE``) or None."""
    return _Comparer(digit_limit).cmp(as_expr(a), as_expr(b))


def compare(a, b, digit_limit: Optional[int] = None) -> int:
    """Return -1, 0 or 1; raise :class:`Undecided` when no engine succeeds."""
    v = verdict(a, b, digit_limit)
    if v in (LT, EQ, GT):
        return v
    raise Undecided(as_expr(a), as_expr(b), v)


def leq(a, b, digit_limit: Optional[int] = None) -> bool:
    """True when ``a <= b`` is proven, False when ``a > b`` is proven."""
    v = verdict(a, b, digit_limit)
    if v in _AT_MOST:
        return True
    if v == GT:
        return False
    raise Undecided(as_expr(a), as_expr(b), v)
