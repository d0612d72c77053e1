"""Splitting operations on squarefree regular chains.

A chain here is a tuple of polynomials with strictly increasing classes whose
initials are regular modulo the saturated ideal of the lower members and whose
members are squarefree over the lower part.  For such chains the saturated
ideal is radical and equals ``{p : prem(p, chain) = 0}``, which is what makes
pseudo-remainder membership exact.

All splitting functions return lists of branches; the union of the branch
zero sets equals the zero set of the input chain.
"""
from __future__ import annotations

from typing import List, Optional, Tuple

from .polynomial import Polynomial, prem_unchecked, prem_var

Chain = Tuple[Polynomial, ...]


class BudgetExceeded(RuntimeError):
    """A configured step or degree limit was exhausted."""

    def __init__(self, what: str, limit: int):
        self.what = what
        self.limit = limit
        super().__init__(f"{what} budget exhausted (limit {limit})")


class Budget:
    def __init__(self, max_steps: int = 100_000, max_degree: int = 512):
        if max_steps <= 0 or max_degree <= 0:
            raise ValueError("budget limits must be positive")
        self.max_steps = max_steps
        self.max_degree = max_degree
        self.steps = 0
        self.peak_degree = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.max_steps:
            raise BudgetExceeded("pseudo-division step", self.max_steps)

    def see(self, p: Polynomial) -> Polynomial:
        d = p.total_degree()
        if d > self.peak_degree:
            self.peak_degree = d
            if d > self.max_degree:
                raise BudgetExceeded("intermediate degree", self.max_degree)
        return p


def reduce(p: Polynomial, chain: Chain, budget: Budget) -> Polynomial:
    budget.tick()
    r = prem_unchecked(p, chain)
    return budget.see(r.primitive())


def _split_at(chain: Chain, v: int) -> Tuple[Chain, Optional[Polynomial], Chain]:
    lo, hi, mid = [], [], None
    for m in chain:
        c = m.class_index()
        if c < v:
            lo.append(m)
        elif c == v:
            mid = m
        else:
            hi.append(m)
    return tuple(lo), mid, tuple(hi)


def insert(chain: Chain, p: Polynomial) -> Chain:
    """Place ``p`` into ``chain`` by class (no member of that class may exist)."""
    v = p.class_index()
    lo, mid, hi = _split_at(chain, v)
    assert mid is None
    return lo + (p,) + hi


def regularize(p: Polynomial, chain: Chain, budget: Budget) -> List[Tuple[Chain, bool]]:
    """Split ``chain`` so that ``p`` is either zero or regular on each branch.

    Returns ``(branch, is_zero)`` pairs.
    """
    out: List[Tuple[Chain, bool]] = []
    stack = [(p, chain)]
    while stack:
        q, T = stack.pop()
        q = reduce(q, T, budget)
        if q.is_zero():
            out.append((T, True))
            continue
        v = q.class_index()
        if v < 0:
            out.append((T, False))
            continue
        lo, t, hi = _split_at(T, v)
        if t is None:
            # free main variable: regular as soon as the leading coefficient is
            lc = q.leading_coefficient(v)
            tail = q.tail(v)
            for T2, z in regularize(lc, T, budget):
                if z:
                    stack.append((tail, T2))
                else:
                    out.append((T2, False))
            continue
        for lo2, g in tower_gcd(t, q, v, lo, budget):
            dg = g.degree(v)
            if dg <= 0:
                out.append((lo2 + (reduce(t, lo2, budget),) + hi, False))
            elif dg == t.degree(v):
                out.append((lo2 + (reduce(t, lo2, budget),) + hi, True))
            else:
                g_red = reduce(g, lo2, budget)
                rest = reduce(prem_var(t, g, v)[0], lo2, budget)
                out.append((lo2 + (g_red,) + hi, True))
                out.append((lo2 + (rest,) + hi, False))
    return out


def tower_gcd(a: Polynomial, b: Polynomial, v: int, lo: Chain, budget: Budget) -> List[Tuple[Chain, Polynomial]]:
    """Gcd of ``a`` and ``b`` in ``x_v`` over the chain ``lo`` with splitting.

    ``a`` must have an initial that is regular modulo ``lo``.  Each returned
    ``(branch, g)`` has ``g`` equal to the gcd over that branch; a ``g`` of
    degree zero in ``x_v`` means the gcd is a unit there.
    """
    one = Polynomial.constant(a.order, 1)
    out: List[Tuple[Chain, Polynomial]] = []
    stack = [(lo, a, b)]
    while stack:
        T, a, b = stack.pop()
        b = reduce(b, T, budget)
        if b.is_zero():
            out.append((T, a))
            continue
        if b.degree(v) <= 0:
            for T2, z in regularize(b, T, budget):
                out.append((T2, a if z else one))
            continue
        lc = b.leading_coefficient(v)
        tail = b.tail(v)
        for T2, z in regularize(lc, T, budget):
            if z:
                stack.append((T2, a, tail))
            else:
                budget.tick()
                r = budget.see(prem_var(a, b, v)[1])
                stack.append((T2, b, r))
    return out


def squarefree(c: Polynomial, lo: Chain, budget: Budget) -> List[Tuple[Chain, Polynomial]]:
    """Squarefree part of ``c`` in its class over ``lo``, with splitting."""
    v = c.class_index()
    out = []
    for T2, g in tower_gcd(c, c.derivative(v), v, lo, budget):
        c2 = reduce(c, T2, budget)
        if g.degree(v) <= 0:
            out.append((T2, c2))
        else:
            q = prem_var(c2, reduce(g, T2, budget), v)[0]
            out.append((T2, reduce(q, T2, budget)))
    return out


def extend(chain: Chain, c: Polynomial, budget: Budget) -> List[Chain]:
    """Append ``c`` (class above every member) keeping only regular branches."""
    v = c.class_index()
    out = []
    for T2, z in regularize(c.leading_coefficient(v), chain, budget):
        if z:
            continue
        c2 = reduce(c, T2, budget)
        for T3, s in squarefree(c2, T2, budget):
            out.append(T3 + (s,))
    return out


def prune(chain: Chain, q: Polynomial, budget: Budget) -> List[Chain]:
    """Branches of ``chain`` on which ``q`` does not vanish identically."""
    return [T for T, z in regularize(q, chain, budget) if not z]
