"""Decomposition of polynomial systems into triangular representations.

The pipeline has three stages:

1. A characteristic-set zero decomposition splits the system into
   triangular sets ``C`` such that the zero set of the system is the union of
   the sets ``{C = 0, initials of C != 0}``.
2. Each such set is rebuilt member by member into squarefree regular chains,
   dropping branches on which an initial vanishes identically.
3. Branches on which a requested inequation vanishes identically are pruned.

Each output chain's saturated ideal is radical and tested exactly by
pseudo-remainder, so the output membership predicate decides radical
membership, not just a sufficient condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from . import _chains
from ._chains import Budget, BudgetExceeded
from .polynomial import OrderMismatchError, Polynomial, VariableOrder, content_in, exact_quotient, initial, prem_unchecked
from .triangular import QuasiComponent, TriangularRepresentation, TriangularSet

__all__ = [
    "Budget",
    "BudgetExceeded",
    "DecompositionTask",
    "DegreeAudit",
    "characteristic_set",
    "decompose",
    "degree_audit",
    "membership_radical",
    "rank_key",
    "zero_decomposition",
]


@dataclass(frozen=True)
class DecompositionTask:
    generators: Tuple[Polynomial, ...]
    order: VariableOrder
    inequations: Tuple[Polynomial, ...] = ()
    max_steps: int = 100_000
    max_degree: int = 512

    def __init__(self, generators: Iterable[Polynomial], order: VariableOrder,
                 inequations: Iterable[Polynomial] = (), max_steps: int = 100_000, max_degree: int = 512):
        gens = tuple(g for g in generators)
        ineqs = tuple(inequations)
        for p in gens + ineqs:
            if p.order != order:
                raise OrderMismatchError("task polynomial built against a different variable order")
        if any(g.is_zero() for g in gens):
            raise ValueError("generators must be nonzero")
        if any(q.is_zero() for q in ineqs):
            raise ValueError("inequations must be nonzero")
        if max_steps <= 0 or max_degree <= 0:
            raise ValueError("budget limits must be positive")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "inequations", ineqs)
        object.__setattr__(self, "max_steps", max_steps)
        object.__setattr__(self, "max_degree", max_degree)


def rank_key(p: Polynomial):
    """Ritt rank with deterministic tie-breaks: class, main degree, total degree, terms."""
    c = p.class_index()
    mdeg = p.degree(c) if c >= 0 else 0
    terms = tuple(sorted(((e[::-1], c_) for e, c_ in p.terms.items()), reverse=True))
    return (c, mdeg, p.total_degree(), terms)


def _reduced_wrt(p: Polynomial, b: Polynomial) -> bool:
    c = b.class_index()
    return p.degree(c) < b.degree(c)


def _basic_set(polys: List[Polynomial]) -> List[Polynomial]:
    ranked = sorted(polys, key=rank_key)
    chosen: List[Polynomial] = []
    for p in ranked:
        if chosen and p.class_index() <= chosen[-1].class_index():
            continue
        if all(_reduced_wrt(p, b) for b in chosen):
            chosen.append(p)
    return chosen


def _normalize(polys: Iterable[Polynomial]) -> List[Polynomial]:
    seen = {}
    for p in polys:
        if not p.is_zero():
            q = p.primitive()
            seen[q] = None
    return sorted(seen, key=rank_key)


def _char_set(polys: List[Polynomial], budget: Budget) -> Optional[Tuple[List[Polynomial], List[Polynomial]]]:
    """Return ``(charset, saturated basis)`` or None when a constant appears."""
    work = _normalize(polys)
    while True:
        if any(p.is_constant() for p in work):
            return None
        B = _basic_set(work)
        bset = set(B)
        rems = []
        for p in work:
            if p in bset:
                continue
            budget.tick()
            r = prem_unchecked(p, B)
            if not r.is_zero():
                rems.append(budget.see(r))
        if not rems:
            return B, work
        work = _normalize(work + rems)


def characteristic_set(basis: Sequence[Polynomial], budget: Optional[Budget] = None,
                       complete: bool = False) -> TriangularSet:
    """Lowest-rank triangular subset of ``basis`` under the Ritt ordering.

    With ``complete`` the remainders of the rest are added back until they all
    vanish, which gives Wu's characteristic set of the ideal.  A nonzero
    constant in the basis (or among the remainders) raises ``ValueError``.
    """
    basis = list(basis)
    if not basis:
        raise ValueError("characteristic set of an empty basis")
    if not complete:
        work = _normalize(basis)
        if any(p.is_constant() for p in work):
            raise ValueError("inconsistent basis: it contains a nonzero constant")
        return TriangularSet(_basic_set(work), basis[0].order)
    res = _char_set(basis, budget or Budget())
    if res is None:
        raise ValueError("inconsistent basis: a nonzero constant was derived")
    return TriangularSet(res[0], basis[0].order)


def zero_decomposition(generators: Sequence[Polynomial], budget: Budget) -> List[List[Polynomial]]:
    """Characteristic sets whose quasi-zero sets cover the zero set of ``generators``."""
    out: List[List[Polynomial]] = []
    seen = set()
    pending = [_normalize(generators)]
    while pending:
        polys = pending.pop()
        key = tuple(polys)
        if key in seen:
            continue
        seen.add(key)
        res = _char_set(polys, budget)
        if res is None:
            continue
        C, basis = res
        out.append(C)
        for c in reversed(C):
            h = initial(c)
            if not h.is_constant():
                pending.append(_normalize(basis + [h]))
    return out


def _chains_from_charset(C: Sequence[Polynomial], budget: Budget) -> List[_chains.Chain]:
    chains: List[_chains.Chain] = [()]
    for c in C:
        nxt = []
        for T in chains:
            nxt.extend(_chains.extend(T, c, budget))
        chains = nxt
        if not chains:
            break
    return chains


def _primitive_chain(T: _chains.Chain) -> _chains.Chain:
    """Divide each member by its content in its main variable.

    The content divides the initial, which is regular on the chain, so the
    saturated ideal and hence prem membership do not change.
    """
    out = []
    for m in T:
        c = content_in(m, m.class_index())
        out.append(m if c.is_constant() else exact_quotient(m, c).primitive())
    return tuple(out)


def _chain_key(T: _chains.Chain):
    return (len(T), [rank_key(m) for m in T])


def decompose(task: DecompositionTask) -> TriangularRepresentation:
    """Triangular representation of the radical of the task's ideal.

    Inequations remove every component on which they vanish identically, so
    the result represents the closure of ``Z(F) minus Z(q)``.
    """
    order = task.order
    if not task.generators:
        return TriangularRepresentation.zero_ideal(order)
    budget = Budget(task.max_steps, task.max_degree)
    chains = []
    seen = set()
    for C in zero_decomposition(task.generators, budget):
        for T in _chains_from_charset(C, budget):
            branches = [T]
            for q in task.inequations:
                branches = [T2 for T1 in branches for T2 in _chains.prune(T1, q, budget)]
            for T2 in branches:
                T2 = _primitive_chain(T2)
                if T2 not in seen:
                    seen.add(T2)
                    chains.append(T2)
    if not chains:
        # only an empty zero set remains
        return TriangularRepresentation.unit_ideal(order)
    chains.sort(key=_chain_key)
    comps = []
    for T in chains:
        ts = TriangularSet(T, order)
        comps.append(QuasiComponent(ts, [q for q in task.inequations]))
    rep = TriangularRepresentation(comps, order)
    for f in task.generators:
        assert rep.contains(f), f"generator {f} does not reduce to zero"
    return rep


def membership_radical(f: Polynomial, R: TriangularRepresentation) -> bool:
    """Conjunction of rep membership over all components."""
    return R.contains(f)


@dataclass(frozen=True)
class DegreeAudit:
    n: int
    d: int
    observed_max: int
    bound: object
    within: bool

    def rows(self) -> List[Tuple[str, str]]:
        from .bounds.expr import pretty

        return [
            ("n", str(self.n)),
            ("d", str(self.d)),
            ("observed max degree", str(self.observed_max)),
            ("bound n*d^(5.5n^3)", pretty(self.bound)),
            ("within", "yes" if self.within else "NO"),
        ]


def degree_audit(R: TriangularRepresentation, n: int, d: int) -> DegreeAudit:
    """Check every output degree against ``n * d^(5.5 n^3)``."""
    from .bounds.compare import compare
    from .bounds.expr import C
    from .bounds.formulas import degree_bound

    if n <= 1:
        raise ValueError("the degree audit needs more than one variable")
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    observed = R.max_degree()
    bound = degree_bound(n, d)
    # constant inputs leave nothing to bound
    within = True if d == 0 else compare(C(observed), bound) <= 0
    return DegreeAudit(n, d, observed, bound, within)
