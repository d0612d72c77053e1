"""Algebraic subgroups of GL_n given by equations, and constructions on them.

Matrix entries are the variables ``x11, x12, ..., xnn`` (row-major, ascending).
The determinant is always an implicit inequation.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .decomposition import DecompositionTask, decompose
from .polynomial import Polynomial, VariableOrder, initial
from .triangular import QuasiComponent, TriangularRepresentation, TriangularSet, representation_restrict

__all__ = [
    "matrix_order",
    "determinant",
    "SubgroupPresentation",
    "RationalHomomorphism",
    "OneParameterUnipotent",
    "GroupCatalogEntry",
    "UnknownPair",
    "ProtoVerdict",
    "parse_group",
    "parse_matrix",
    "compose",
    "preimage_intersection",
    "one_param_subgroup",
    "product_length",
    "unipotent_group_equations",
    "identity_component",
    "character_kernel_intersection",
    "proto_check",
    "random_matrix",
    "random_special_linear",
]

Matrix = List[List[Fraction]]


def matrix_order(n: int, prefix: str = "x") -> VariableOrder:
    sep = "" if n < 10 else "_"
    return VariableOrder([f"{prefix}{i}{sep}{j}" for i in range(1, n + 1) for j in range(1, n + 1)])


def _entries(order: VariableOrder, n: int, offset: int = 0) -> List[List[Polynomial]]:
    return [[Polynomial.variable(order, offset + i * n + j) for j in range(n)] for i in range(n)]


def _sign(perm: Sequence[int]) -> int:
    s, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def determinant(m):
    """Leibniz expansion; works for polynomial or rational entries."""
    n = len(m)
    total = None
    for perm in permutations(range(n)):
        term = m[0][perm[0]]
        for i in range(1, n):
            term = term * m[i][perm[i]]
        term = term if _sign(perm) > 0 else -term
        total = term if total is None else total + term
    return total


def _identity_point(n: int) -> List[Fraction]:
    return [Fraction(int(i == j)) for i in range(n) for j in range(n)]


def _flatten(g: Sequence[Sequence]) -> List[Fraction]:
    return [Fraction(v) for row in g for v in row]


def _matmul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m)), a[i][0] * 0) for j in range(k)] for i in range(n)]


# -- presentations -------------------------------------------------------------

@dataclass
class SubgroupPresentation:
    """``H = Z(equations) minus Z(det)`` inside ``GL_n``."""

    n: int
    equations: Tuple[Polynomial, ...] = ()
    name: str = ""
    _rep: Optional[TriangularRepresentation] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.equations = tuple(self.equations)
        order = matrix_order(self.n)
        ident = _identity_point(self.n)
        for p in self.equations:
            if p.order != order:
                raise ValueError("subgroup equations must use the matrix-entry variables x11..xnn")
            if p.evaluate(ident) != 0:
                raise ValueError(f"the identity matrix does not satisfy {p}")

    @property
    def order(self) -> VariableOrder:
        return matrix_order(self.n)

    def det(self) -> Polynomial:
        return determinant(_entries(self.order, self.n))

    def representation(self) -> TriangularRepresentation:
        if self._rep is None:
            eqs = [p for p in self.equations if not p.is_zero()]
            if not eqs:
                self._rep = TriangularRepresentation.zero_ideal(self.order)
            else:
                self._rep = decompose(DecompositionTask(eqs, self.order, inequations=[self.det()]))
        return self._rep

    def contains_matrix(self, g) -> Optional[bool]:
        """Membership of an invertible matrix; None when the representation cannot tell."""
        pt = _flatten(g)
        if self.det().evaluate(pt) == 0:
            return False
        return self.representation().contains_point(pt)


@dataclass
class RationalHomomorphism:
    """``g -> (P_ij(g) / Q(g))`` from ``GL_source_n`` to ``GL_target_l``."""

    source_n: int
    target_l: int
    numerators: Tuple[Tuple[Polynomial, ...], ...]
    denominator: Polynomial

    def __post_init__(self):
        self.numerators = tuple(tuple(row) for row in self.numerators)
        order = matrix_order(self.source_n)
        if len(self.numerators) != self.target_l or any(len(r) != self.target_l for r in self.numerators):
            raise ValueError("numerators must form a target_l x target_l array")
        for p in [q for row in self.numerators for q in row] + [self.denominator]:
            if p.order != order:
                raise ValueError("homomorphism entries must use the source matrix variables")
        if self.denominator.is_zero():
            raise ValueError("the denominator cannot be zero")

    @classmethod
    def det(cls, n: int) -> "RationalHomomorphism":
        order = matrix_order(n)
        return cls(n, 1, ((determinant(_entries(order, n)),),), Polynomial.constant(order, 1))

    def bounded_by(self) -> int:
        return max([p.total_degree() for row in self.numerators for p in row] + [self.denominator.total_degree()])

    def apply(self, g) -> Optional[Matrix]:
        pt = _flatten(g)
        q = self.denominator.evaluate(pt)
        if q == 0:
            return None
        return [[p.evaluate(pt) / q for p in row] for row in self.numerators]


def compose(f: Polynomial, tau: RationalHomomorphism) -> Polynomial:
    """``Q^deg(f) * f(P/Q)``: pull ``f`` back along ``tau`` and clear denominators."""
    e = f.total_degree()
    src = matrix_order(tau.source_n)
    flat = [p for row in tau.numerators for p in row]
    qpow = [Polynomial.constant(src, 1)]
    for _ in range(e):
        qpow.append(qpow[-1] * tau.denominator)
    out = Polynomial.constant(src, 0)
    for exps, c in f.terms.items():
        term = Polynomial.constant(src, c)
        for i, k in enumerate(exps):
            if k:
                term = term * flat[i] ** k
        out = out + term * qpow[e - sum(exps)]
    return out


def _components(R: TriangularRepresentation) -> List[QuasiComponent]:
    if R.components:
        return list(R.components)
    # the zero ideal: one component with no members
    return [QuasiComponent(TriangularSet([], R.order))]


def preimage_intersection(H: SubgroupPresentation, Hp: SubgroupPresentation,
                          tau: RationalHomomorphism) -> TriangularRepresentation:
    """Representation of ``tau^-1(Hp intersect tau(H))`` inside ``GL_n``."""
    if tau.source_n != H.n or tau.target_l != Hp.n:
        raise ValueError("homomorphism sizes do not match the groups")
    order = H.order
    RH, RHp = H.representation(), Hp.representation()
    if RH.unit or RHp.unit:
        return TriangularRepresentation.unit_ideal(order)
    det = H.det()
    comps: List[QuasiComponent] = []
    seen = set()
    for c in _components(RH):
        if c.members and TriangularRepresentation([c], order).contains(tau.denominator):
            raise ValueError("the denominator vanishes identically on a component of the source group")
        for cp in _components(RHp):
            pulled = [compose(f, tau) for f in cp.members]
            gens = [p for p in list(c.members) + pulled if not p.is_zero()]
            ineqs = [det]
            if not tau.denominator.is_constant():
                ineqs.append(tau.denominator)
            ineqs += [h for h in c.set.initials() if not h.is_constant()]
            ineqs += [q for q in (compose(initial(f), tau) for f in cp.members) if not q.is_constant()]
            if not gens:
                return TriangularRepresentation.zero_ideal(order)
            R = decompose(DecompositionTask(gens, order, inequations=[q for q in ineqs if not q.is_zero()]))
            if R.unit:
                continue
            if not R.components:
                return TriangularRepresentation.zero_ideal(order)
            for comp in R.components:
                key = comp.members
                if key not in seen:
                    seen.add(key)
                    comps.append(comp)
    if not comps:
        return TriangularRepresentation.unit_ideal(order)
    return TriangularRepresentation(comps, order)


# -- unipotent subgroups ------------------------------------------------------------

@dataclass
class OneParameterUnipotent:
    """``x -> exp(x M)`` for a nilpotent rational matrix ``M``."""

    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        n = len(m)
        if n == 0 or any(len(r) != n for r in m):
            raise ValueError("the generator must be a nonempty square matrix")
        self.matrix = m
        p = [list(r) for r in m]
        for _ in range(n - 1):
            p = _matmul(p, [list(r) for r in m])
        if any(v for row in p for v in row):
            raise ValueError("the generator is not nilpotent")

    @property
    def n(self) -> int:
        return len(self.matrix)

    def powers(self) -> List[Matrix]:
        n = self.n
        ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        out = [ident]
        for _ in range(1, n):
            out.append(_matmul(out[-1], [list(r) for r in self.matrix]))
        return out


def one_param_subgroup(u: OneParameterUnipotent, order: Optional[VariableOrder] = None,
                       var: int = 0) -> List[List[Polynomial]]:
    """Entries ``sum_k (M^k)_ij x^k / k!`` as polynomials in ``order[var]``."""
    if order is None:
        order = VariableOrder(["x"])
    x = Polynomial.variable(order, var)
    n = u.n
    pw = u.powers()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            p = Polynomial.constant(order, 0)
            for k in range(n):
                if pw[k][i][j]:
                    p = p + (x ** k).scale(pw[k][i][j] / factorial(k))
            row.append(p)
        out.append(row)
    return out


def _product_matrix(gens: Sequence[OneParameterUnipotent], s: int, order: VariableOrder,
                    offset: int) -> List[List[Polynomial]]:
    n = gens[0].n
    acc = [[Polynomial.constant(order, int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(s):
        acc = _matmul(acc, one_param_subgroup(gens[i % len(gens)], order, offset + i))
    return acc


def _rank(rows: List[List[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _jacobian_rank(gens, s: int, rng: random.Random, trials: int = 2) -> int:
    if s == 0:
        return 0
    order = VariableOrder([f"t{i}" for i in range(1, s + 1)])
    P = _product_matrix(gens, s, order, 0)
    flat = [p for row in P for p in row]
    best = 0
    for _ in range(trials):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(s)]
        jac = [[p.derivative(k).evaluate(pt) for k in range(s)] for p in flat]
        best = max(best, _rank(jac))
    return best


def product_length(gens: Sequence[OneParameterUnipotent], seed: int = 0) -> int:
    """Shortest cyclic product of the one-parameter subgroups whose image has full dimension.

    The dimension is read off the Jacobian rank at random rational points; the
    search stops once a full cycle of generators adds nothing.
    """
    if not gens:
        return 0
    n = gens[0].n
    rng = random.Random(seed)
    cap = 2 * n * n
    ranks = [0]
    stall = 0
    s = 0
    while s < cap + len(gens) and stall < len(gens):
        s += 1
        ranks.append(_jacobian_rank(gens, s, rng))
        stall = stall + 1 if ranks[-1] == ranks[-2] else 0
    final = max(ranks)
    return ranks.index(final)


def unipotent_group_equations(gens: Sequence[OneParameterUnipotent], length: Optional[int] = None,
                              seed: int = 0, max_steps: int = 100_000) -> TriangularRepresentation:
    """Equations of the closure of the group generated by the one-parameter subgroups.

    The matrix variables ``y11..ynn`` come first (lowest) and the parameters
    after them, so eliminating the parameters is a restriction to the first
    ``n^2`` variables.
    """
    if not gens:
        raise ValueError("at least one generator is required")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators must share the matrix size")
    s = product_length(gens, seed) if length is None else length
    if s > 2 * n * n:
        raise ValueError(f"product length {s} exceeds 2n^2 = {2 * n * n}")
    ynames = matrix_order(n, "y").names
    order = VariableOrder(list(ynames) + [f"t{i}" for i in range(1, s + 1)])
    P = _product_matrix(gens, s, order, n * n)
    Y = _entries(order, n)
    eqs = [Y[i][j] - P[i][j] for i in range(n) for j in range(n)]
    R = decompose(DecompositionTask(eqs, order, max_steps=max_steps))
    return representation_restrict(R, n * n, shrink=True)


# -- catalog ------------------------------------------------------------------------

_MATRIX_KINDS = ("GL", "SL", "DiagonalTorus", "Borel", "UnipotentUpper")


@dataclass(frozen=True)
class GroupCatalogEntry:
    """A named group from a small catalog of algebraic subgroups."""

    kind: str
    n: int = 1
    m: int = 0  # order of FiniteCyclic

    def __post_init__(self):
        if self.kind in _MATRIX_KINDS:
            if self.n < 2:
                raise ValueError(f"{self.kind} needs n >= 2 (use Scalars for GL(1))")
        elif self.kind in ("Scalars", "FiniteCyclic"):
            if self.n != 1:
                raise ValueError(f"{self.kind} lives in GL(1)")
            if self.kind == "FiniteCyclic" and self.m < 1:
                raise ValueError("FiniteCyclic needs a positive order")
        elif self.kind == "Trivial":
            if self.n < 1:
                raise ValueError("Trivial needs n >= 1")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind in _MATRIX_KINDS:
            return f"{self.kind}({self.n})"
        if self.kind == "FiniteCyclic":
            return f"FiniteCyclic({self.m})"
        if self.kind == "Trivial":
            return f"Trivial({self.n})"
        return self.kind

    def __str__(self) -> str:
        return self.name

    @property
    def is_finite(self) -> bool:
        return self.kind in ("FiniteCyclic", "Trivial")

    @property
    def is_connected(self) -> bool:
        return not (self.kind == "FiniteCyclic" and self.m > 1)

    @property
    def identity_component(self) -> "GroupCatalogEntry":
        return identity_component(self)

    @property
    def character_kernel_intersection(self) -> "GroupCatalogEntry":
        return character_kernel_intersection(self)

    def _normal(self) -> "GroupCatalogEntry":
        # FiniteCyclic(1) and Trivial(1) are the same group
        if self.kind == "FiniteCyclic" and self.m == 1:
            return GroupCatalogEntry("Trivial", 1)
        return self

    def presentation(self) -> SubgroupPresentation:
        n = self.n
        order = matrix_order(n)
        X = _entries(order, n)
        eqs: List[Polynomial] = []
        if self.kind == "SL":
            eqs = [determinant(X) - 1]
        elif self.kind == "DiagonalTorus":
            eqs = [X[i][j] for i in range(n) for j in range(n) if i != j]
        elif self.kind == "Borel":
            eqs = [X[i][j] for i in range(n) for j in range(n) if i > j]
        elif self.kind == "UnipotentUpper":
            eqs = [X[i][j] for i in range(n) for j in range(n) if i > j] + [X[i][i] - 1 for i in range(n)]
        elif self.kind == "FiniteCyclic":
            eqs = [X[0][0] ** self.m - 1]
        elif self.kind == "Trivial":
            eqs = [X[i][j] - int(i == j) for i in range(n) for j in range(n)]
        return SubgroupPresentation(n, eqs, self.name)


_NAME_RE = re.compile(r"^\s*([A-Za-z*]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")
_ALIASES = {"C*": "Scalars", "Gm": "Scalars", "mu": "FiniteCyclic", "U": "UnipotentUpper", "B": "Borel",
            "T": "DiagonalTorus", "Unipotent": "UnipotentUpper"}


def parse_group(text: str, n: Optional[int] = None) -> GroupCatalogEntry:
    """Parse names such as ``GL(2)``, ``SL(3)``, ``Scalars``, ``FiniteCyclic(3)``, ``Trivial(2)``."""
    mt = _NAME_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse group name {text!r}")
    kind, arg = mt.group(1), mt.group(2)
    kind = _ALIASES.get(kind, kind)
    if kind == "FiniteCyclic":
        if arg is None:
            raise ValueError("FiniteCyclic needs its order, e.g. FiniteCyclic(3)")
        return GroupCatalogEntry("FiniteCyclic", 1, int(arg))
    if kind == "Scalars":
        if arg not in (None, "1"):
            raise ValueError("Scalars lives in GL(1)")
        return GroupCatalogEntry("Scalars", 1)
    if kind == "Trivial":
        return GroupCatalogEntry("Trivial", int(arg) if arg else (n or 1))
    if kind in _MATRIX_KINDS:
        if arg is None and n is None:
            raise ValueError(f"{kind} needs a size, e.g. {kind}(2)")
        size = int(arg) if arg else n
        if kind == "GL" and size == 1:
            return GroupCatalogEntry("Scalars", 1)
        return GroupCatalogEntry(kind, size)
    raise ValueError(f"unknown group {text!r}")


def identity_component(g: GroupCatalogEntry) -> GroupCatalogEntry:
    if g.kind == "FiniteCyclic":
        return GroupCatalogEntry("Trivial", 1)
    return g


def character_kernel_intersection(g: GroupCatalogEntry) -> GroupCatalogEntry:
    """Intersection of the kernels of all characters of a connected catalog group."""
    if not g.is_connected:
        raise ValueError(f"{g} is not connected; take its identity component first")
    g = g._normal()
    if g.kind == "GL":
        return GroupCatalogEntry("SL", g.n)
    if g.kind in ("DiagonalTorus", "Scalars"):
        return GroupCatalogEntry("Trivial", g.n)
    if g.kind == "Borel":
        return GroupCatalogEntry("UnipotentUpper", g.n)
    return g


class UnknownPair(ValueError):
    """The fact tables say nothing about this pair of groups."""


# subgroup relations among the matrix families of one size
_CONTAINED_IN = {
    "GL": {"GL"},
    "SL": {"SL", "GL"},
    "DiagonalTorus": {"DiagonalTorus", "Borel", "GL"},
    "Borel": {"Borel", "GL"},
    "UnipotentUpper": {"UnipotentUpper", "Borel", "SL", "GL"},
}
# normal subgroups: (sub, group) pairs with sub normal in group
_NORMAL_IN = {("SL", "GL"), ("UnipotentUpper", "Borel")}


def _check_pair(a: GroupCatalogEntry, b: GroupCatalogEntry) -> None:
    if a.n != b.n:
        raise UnknownPair(f"{a} and {b} live in different ambient groups")


def contained(a: GroupCatalogEntry, b: GroupCatalogEntry) -> bool:
    """``a`` is a subgroup of ``b``."""
    _check_pair(a, b)
    a, b = a._normal(), b._normal()
    if a == b or a.kind == "Trivial":
        return True
    if b.kind == "Trivial":
        return False
    if a.n == 1:
        if b.kind == "Scalars":
            return True
        if a.kind == "Scalars":
            return False
        return b.m % a.m == 0
    return b.kind in _CONTAINED_IN[a.kind]


def normal_in(a: GroupCatalogEntry, b: GroupCatalogEntry) -> bool:
    """``a`` is a normal subgroup of ``b``."""
    if not contained(a, b):
        return False
    a, b = a._normal(), b._normal()
    if a == b or a.kind == "Trivial" or b.n == 1:
        # GL(1) is abelian, so all its subgroups are normal
        return True
    return (a.kind, b.kind) in _NORMAL_IN


@dataclass(frozen=True)
class ProtoVerdict:
    passed: bool
    failing_clause: Optional[str]
    trace: Tuple[str, ...]

    def __str__(self) -> str:
        head = "pass" if self.passed else f"fail at clause ({self.failing_clause})"
        return head + "\n" + "\n".join(f"  {t}" for t in self.trace)


def proto_check(candidate: GroupCatalogEntry, galois: GroupCatalogEntry) -> ProtoVerdict:
    """Check ``(H^0)^t`` normal in ``G^0``, ``G^0`` in ``G``, and ``G`` in ``H`` for ``H = candidate``."""
    trace: List[str] = []
    ok = contained(galois, candidate)
    trace.append(f"(i)   {galois} contained in {candidate}: {'yes' if ok else 'no'}")
    if not ok:
        return ProtoVerdict(False, "i", tuple(trace))
    h0 = identity_component(candidate)
    ht = character_kernel_intersection(h0)
    g0 = identity_component(galois)
    trace.append(f"      identity component of {candidate} is {h0}; character kernels meet in {ht}")
    trace.append(f"      identity component of {galois} is {g0}")
    ok = contained(ht, g0)
    trace.append(f"(ii)  {ht} contained in {g0}: {'yes' if ok else 'no'}")
    if not ok:
        return ProtoVerdict(False, "ii", tuple(trace))
    ok = normal_in(ht, g0)
    trace.append(f"(iii) {ht} normal in {g0}: {'yes' if ok else 'no'}")
    if not ok:
        return ProtoVerdict(False, "iii", tuple(trace))
    return ProtoVerdict(True, None, tuple(trace))


# -- parsing and sampling ----------------------------------------------------------

def parse_matrix(text: str) -> Matrix:
    """Parse ``[[a, b], [c, d]]`` with integer or ``p/q`` entries."""
    rows = re.findall(r"\[([^\[\]]*)\]", text)
    if not rows:
        raise ValueError(f"cannot parse matrix {text!r}")
    out = []
    for r in rows:
        cells = [c.strip() for c in r.split(",")]
        try:
            out.append([Fraction(c) for c in cells])
        except ValueError as exc:
            raise ValueError(f"bad matrix entry in {text!r}: {exc}") from None
    if any(len(r) != len(out) for r in out):
        raise ValueError("matrix must be square")
    return out


def random_matrix(n: int, rng: random.Random, bound: int = 5) -> Matrix:
    while True:
        g = [[Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        if determinant(g) != 0:
            return g


def random_special_linear(n: int, rng: random.Random, bound: int = 4) -> Matrix:
    """A random product of elementary matrices, hence of determinant one."""
    g = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        e = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
        e[i][j] = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        g = _matmul(g, e)
    return g
