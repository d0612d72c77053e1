"""Triangular sets, quasi-components and triangular representations.

A :class:`TriangularRepresentation` stands for the radical ideal made of all
polynomials whose pseudo-remainder vanishes modulo every component.  Two
conventions fill in the degenerate cases:

* an empty component family denotes the zero ideal, so only ``0`` is a member;
* the ``unit`` flag marks an inconsistent system, where every polynomial is a
  member and the zero set is empty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from .polynomial import (
    NotTriangularError,
    OrderMismatchError,
    Polynomial,
    VariableOrder,
    initial,
    prem,
    prem_unchecked,
)
from .textio import ParseError, _strip_comment, parse_polynomial, parse_vars_line

__all__ = [
    "TriangularSet",
    "QuasiComponent",
    "TriangularRepresentation",
    "is_triangular",
    "rep_contains",
    "rep_is_ideal_witness",
    "restrict",
    "representation_restrict",
    "representation_product",
    "format_representation",
    "parse_representation",
]


def is_triangular(polys: Sequence[Polynomial]) -> bool:
    """True iff no member is constant and classes strictly increase."""
    last = -1
    for p in polys:
        c = p.class_index()
        if c < 0 or c <= last:
            return False
        last = c
    return True


@dataclass(frozen=True)
class TriangularSet:
    members: Tuple[Polynomial, ...]
    order: VariableOrder

    def __init__(self, members: Iterable[Polynomial], order: Optional[VariableOrder] = None):
        members = tuple(members)
        if order is None:
            if not members:
                raise ValueError("an empty triangular set needs an explicit order")
            order = members[0].order
        for m in members:
            if m.order != order:
                raise OrderMismatchError("member built against a different variable order")
        if not is_triangular(members):
            raise NotTriangularError("classes must strictly increase and members must be non-constant")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def classes(self) -> List[int]:
        return [m.class_index() for m in self.members]

    def initials(self) -> List[Polynomial]:
        return [initial(m) for m in self.members]

    def member_of_class(self, i: int) -> Optional[Polynomial]:
        for m in self.members:
            if m.class_index() == i:
                return m
        return None

    def max_degree(self) -> int:
        return max((m.total_degree() for m in self.members), default=0)

    def contains(self, f: Polynomial) -> bool:
        return rep_contains(self, f)

    def __str__(self) -> str:
        return "{" + ", ".join(str(m) for m in self.members) + "}"


@dataclass(frozen=True)
class QuasiComponent:
    """A triangular set plus polynomials required to be nonzero on it."""

    set: TriangularSet
    inequations: Tuple[Polynomial, ...] = field(default=())

    def __init__(self, set: TriangularSet, inequations: Iterable[Polynomial] = ()):
        ineqs = tuple(inequations)
        for q in ineqs:
            if q.is_zero():
                raise ValueError("an inequation cannot be the zero polynomial")
            if q.order != set.order:
                raise OrderMismatchError("inequation built against a different variable order")
        object.__setattr__(self, "set", set)
        object.__setattr__(self, "inequations", ineqs)

    @property
    def members(self) -> Tuple[Polynomial, ...]:
        return self.set.members

    def violated(self) -> List[Polynomial]:
        """Inequations that vanish identically on the component."""
        return [q for q in self.inequations if rep_contains(self.set, q)]


def _as_component(c) -> QuasiComponent:
    if isinstance(c, QuasiComponent):
        return c
    if isinstance(c, TriangularSet):
        return QuasiComponent(c)
    raise TypeError(f"expected a TriangularSet or QuasiComponent, got {type(c).__name__}")


@dataclass(frozen=True)
class TriangularRepresentation:
    components: Tuple[QuasiComponent, ...]
    order: VariableOrder
    unit: bool = False

    def __init__(self, components: Iterable, order: VariableOrder, unit: bool = False):
        comps = tuple(_as_component(c) for c in components)
        for c in comps:
            if c.set.order != order:
                raise OrderMismatchError("component built against a different variable order")
        if unit and comps:
            raise ValueError("the unit representation has no components")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "unit", unit)

    @classmethod
    def unit_ideal(cls, order: VariableOrder) -> "TriangularRepresentation":
        return cls((), order, unit=True)

    @classmethod
    def zero_ideal(cls, order: VariableOrder) -> "TriangularRepresentation":
        return cls((), order)

    @property
    def sets(self) -> List[TriangularSet]:
        return [c.set for c in self.components]

    def contains(self, f: Polynomial) -> bool:
        """Radical membership: pseudo-remainder zero modulo every component."""
        if f.order != self.order:
            raise OrderMismatchError("polynomial built against a different variable order")
        if self.unit:
            return True
        if not self.components:
            return f.is_zero()
        return all(prem_unchecked(f, c.set.members).is_zero() for c in self.components)

    def max_degree(self) -> int:
        return max((c.set.max_degree() for c in self.components), default=0)

    def contains_point(self, point: Sequence) -> Optional[bool]:
        """Decide whether ``point`` lies on the represented zero set.

        A point lies on a component when all members vanish there and no
        initial does.  When members vanish but some initial does too, the
        answer for that component is unknown and ``None`` may be returned.
        """
        if self.unit:
            return False
        if not self.components:
            return True
        pt = [Fraction(v) for v in point]
        unknown = False
        for c in self.components:
            if any(m.evaluate(pt) != 0 for m in c.members):
                continue
            if all(h.evaluate(pt) != 0 for h in c.set.initials()):
                return True
            unknown = True
        return None if unknown else False

    def reorder(self, order: VariableOrder) -> "TriangularRepresentation":
        """Re-express every component over ``order`` (matching names)."""
        comps = []
        for c in self.components:
            ts = TriangularSet([m.reorder(order) for m in c.members], order)
            comps.append(QuasiComponent(ts, [q.reorder(order) for q in c.inequations]))
        return TriangularRepresentation(comps, order, self.unit)

    def __str__(self) -> str:
        return format_representation(self)


def rep_contains(G, f: Polynomial) -> bool:
    """Membership in rep(G): the pseudo-remainder of ``f`` by ``G`` is zero."""
    members = G.members if isinstance(G, (TriangularSet, QuasiComponent)) else list(G)
    return prem(f, members).is_zero()


def rep_is_ideal_witness(G, samples: Sequence[Polynomial]) -> Optional[Tuple[Polynomial, Polynomial]]:
    """Find ``f, g`` in rep(G) among ``samples`` whose difference is not in rep(G)."""
    inside = [s for s in samples if rep_contains(G, s)]
    for f, g in combinations(inside, 2):
        if not rep_contains(G, f - g):
            return f, g
    return None


def restrict(G: TriangularSet, r: int) -> TriangularSet:
    """Members of ``G`` involving only the first ``r`` variables."""
    n = len(G.order)
    if not 0 <= r <= n:
        raise ValueError(f"keep-count must lie in 0..{n}, got {r}")
    return TriangularSet([m for m in G.members if m.class_index() < r], G.order)


def representation_restrict(R: TriangularRepresentation, r: int, shrink: bool = False) -> TriangularRepresentation:
    """Componentwise restriction to ``x_1..x_r``.

    With ``shrink`` the result is re-expressed over the order of the first
    ``r`` variables; otherwise it keeps the original order.
    """
    if R.unit:
        out = TriangularRepresentation.unit_ideal(R.order)
    else:
        comps = []
        for c in R.components:
            ts = restrict(c.set, r)
            ineqs = [q for q in c.inequations if q.class_index() < r]
            comps.append(QuasiComponent(ts, ineqs))
        out = TriangularRepresentation(comps, R.order)
    if shrink:
        return out.reorder(VariableOrder(R.order.names[:r]))
    return out


def representation_product(RI: TriangularRepresentation, RJ: TriangularRepresentation) -> TriangularRepresentation:
    """Representation of the radical of a product ideal.

    Components are concatenated.  The unit ideal is neutral, and an empty
    family is treated as absent so the other factor is returned unchanged.
    """
    if RI.order != RJ.order:
        raise OrderMismatchError("representations use different variable orders")
    if RI.unit:
        return RJ
    if RJ.unit:
        return RI
    if not RJ.components:
        return RI
    if not RI.components:
        return RJ
    return TriangularRepresentation(RI.components + RJ.components, RI.order)


# -- serialization -----------------------------------------------------------

def format_representation(R: TriangularRepresentation) -> str:
    lines = [f"vars: {','.join(R.order.names)}"]
    if R.unit:
        lines.append("1")
        return "\n".join(lines) + "\n"
    for k, c in enumerate(R.components):
        if k:
            lines.append("---")
        if not c.members and not c.inequations:
            lines.append("0")
        lines.extend(str(m) for m in c.members)
        lines.extend(f"!= {q}" for q in c.inequations)
    return "\n".join(lines) + "\n"


def parse_representation(text: str) -> TriangularRepresentation:
    raw_lines = text.splitlines()
    order = None
    start = len(raw_lines)
    for idx, raw in enumerate(raw_lines):
        if _strip_comment(raw).strip():
            order = parse_vars_line(_strip_comment(raw), idx + 1)
            start = idx + 1
            break
    if order is None:
        return TriangularRepresentation((), VariableOrder([]))

    blocks: List[List[Tuple[int, str]]] = [[]]
    for idx in range(start, len(raw_lines)):
        body = _strip_comment(raw_lines[idx])
        if body.strip() == "---":
            blocks.append([])
        elif body.strip():
            blocks[-1].append((idx + 1, body))
    if len(blocks) == 1 and not blocks[0]:
        return TriangularRepresentation((), order)

    comps = []
    for block in blocks:
        if not block:
            raise ParseError("empty component (write '0' for the empty triangular set)", start + 1, 1)
        members, ineqs = [], []
        first_line = block[0][0]
        for lineno, body in block:
            stripped = body.lstrip()
            if stripped.startswith("!="):
                col = len(body) - len(stripped) + 3
                ineqs.append(parse_polynomial(stripped[2:], order, lineno, col))
            else:
                members.append(parse_polynomial(body, order, lineno, 1))
        nonzero = [m for m in members if not m.is_zero()]
        if any(m.is_constant() for m in nonzero):
            return TriangularRepresentation.unit_ideal(order)
        try:
            ts = TriangularSet(nonzero, order)
            comps.append(QuasiComponent(ts, ineqs))
        except (NotTriangularError, ValueError) as exc:
            raise ParseError(str(exc), first_line, 1) from None
    return TriangularRepresentation(comps, order)
