"""Degree and index bounds for proto-Galois group computations, as expression trees.

``n`` is the matrix size throughout.  The builders return unnormalized trees
whose shape follows the defining formulas, so structural identities such as
``d2 = d1 * D * C(n^2 + D, D)`` hold by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .compare import EQ, GE, GT, LE, LT, Undecided, verdict
from .expr import Add, Binomial, C, CentralBinomialMax, Expr, Mul, Pow, PowerDiff, SchurJ, pretty

__all__ = [
    "E_LOW",
    "E_HIGH",
    "bound_D",
    "bound_d1",
    "bound_d2",
    "bound_d3",
    "bound_dbar",
    "schur_J",
    "dstar_nstar",
    "feng_bounds",
    "tower",
    "ChainStep",
    "verify_chain",
    "comparison_report",
    "degree_bound",
    "format_steps",
]

# rational enclosure of Euler's number
E_LOW = Fraction(2718281, 10 ** 6)
E_HIGH = Fraction(2718282, 10 ** 6)


def _check(n: int) -> None:
    if int(n) != n or n <= 1:
        raise ValueError(f"the bounds need an integer n > 1, got {n}")


def degree_bound(n: int, d: int) -> Expr:
    """``n * d^(5.5 n^3)``, the output degree bound for triangular decomposition."""
    return Mul((C(n), Pow(C(d), C(Fraction(11, 2) * n ** 3))))


def bound_D(n: int) -> Expr:
    _check(n)
    return Mul((C(3 * n * n), Pow(C(2 * n * n * (n - 1)), C(Fraction(297, 2) * n ** 6))))


def _binom_D(n: int) -> Expr:
    D = bound_D(n)
    return Binomial(Add((C(n * n), D)), D)


def bound_d1(n: int) -> Expr:
    _check(n)
    return Pow(CentralBinomialMax(_binom_D(n)), C(2))


def bound_d2(n: int) -> Expr:
    _check(n)
    return Mul((bound_d1(n), bound_D(n), _binom_D(n)))


def _d1_squared_plus_one(n: int) -> Expr:
    return Add((Pow(bound_d1(n), C(2)), C(1)))


def bound_d3(n: int) -> Expr:
    _check(n)
    m = _d1_squared_plus_one(n)
    inner = Mul((bound_d2(n), m, Pow(CentralBinomialMax(m), C(2))))
    return Mul((C(n), Pow(inner, C(Fraction(11, 2) * n ** 3))))


def bound_dbar(n: int) -> Expr:
    """Schur's bound applied to ``maxC(d1^2 + 1)^2`` with the power ``2n^2``."""
    _check(n)
    return SchurJ(Pow(CentralBinomialMax(_d1_squared_plus_one(n)), C(2)), 2 * n * n)


def schur_J(a: int) -> Expr:
    """Schur's index bound for finite subgroups of ``GL_a``."""
    if a < 1:
        raise ValueError("Schur's bound needs a >= 1")
    return SchurJ(C(a), 2 * a * a)


def dstar_nstar(n: int, d: int) -> Tuple[Expr, Expr]:
    """Degree bounds for the exterior-power construction of a subgroup bounded by ``d``."""
    _check(n)
    if d < 1:
        raise ValueError("the degree bound d must be at least 1")
    b = Binomial(C(n * n + d), C(d))
    dstar = Pow(CentralBinomialMax(b), C(2))
    return dstar, Mul((dstar, C(d), b))


def tower(*levels) -> Expr:
    """``tower(a, b, c) = a^(b^c)``."""
    out = C(levels[-1]) if not isinstance(levels[-1], Expr) else levels[-1]
    for base in reversed(levels[:-1]):
        out = Pow(C(base) if not isinstance(base, Expr) else base, out)
    return out


def feng_bounds(n: int) -> Tuple[Expr, Expr]:
    """The earlier degree bound and index bound, as literal towers."""
    _check(n)
    d_tilde = tower(32, 2, 2, 2, Pow(C(2 * n), Pow(C(2), C(24 * n * n))))
    index = tower(4, 2, 2, Pow(C(2 * n), Pow(C(2), C(12 * n * n))))
    return d_tilde, index


# -- inequality chains --------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    label: str
    lhs: Expr
    rhs: Expr
    relation: str  # "<=", "<" or "="
    verdict: str  # "holds", "fails" or "undecided"
    detail: str = ""


_SYMBOL = {LT: "<", EQ: "=", GT: ">", LE: "<=", GE: ">="}


def _judge(label: str, lhs: Expr, rhs: Expr, relation: str) -> ChainStep:
    try:
        v = verdict(lhs, rhs)
    except Undecided as exc:  # pragma: no cover - verdict itself does not raise
        return ChainStep(label, lhs, rhs, relation, "undecided", str(exc))
    if v is None:
        return ChainStep(label, lhs, rhs, relation, "undecided", "no engine settled it")
    ok = {
        "<=": v in (LT, EQ, LE),
        "<": v == LT,
        "=": v == EQ,
    }[relation]
    if ok:
        return ChainStep(label, lhs, rhs, relation, "holds", _SYMBOL[v])
    if relation == "<" and v == LE:
        return ChainStep(label, lhs, rhs, relation, "undecided", "only <= proven")
    return ChainStep(label, lhs, rhs, relation, "fails", _SYMBOL[v])


def _chain_exprs(n: int):
    n2 = n * n
    T = C(2 * n ** 3)
    X = Pow(T, C(149 * n ** 8))
    e_lo, e_hi = C(E_LOW), C(E_HIGH)
    D = bound_D(n)
    top = Add((C(n2), D))
    half6 = C(Fraction(297, 2) * n ** 6)
    half8 = C(Fraction(297, 2) * n ** 8)
    p55 = C(Fraction(11, 2) * n ** 3)
    four_X, sixteen_X = Pow(C(4), X), Pow(C(16), X)
    return n2, T, X, e_lo, e_hi, D, top, half6, half8, p55, four_X, sixteen_X


def verify_chain(n: int) -> List[ChainStep]:
    """Check each displayed step of the numerical bound derivation."""
    _check(n)
    n2, T, X, e_lo, e_hi, D, top, half6, half8, p55, four_X, sixteen_X = _chain_exprs(n)
    steps: List[Tuple[str, Expr, Expr, str]] = []

    def step(label, lhs, rhs, rel="<="):
        steps.append((label, lhs, rhs, rel))

    D_upper = Mul((C(3 * n2), Pow(T, half6)))
    step("D <= 3n^2 (2n^3)^(148.5n^6)", D, D_upper)

    binom = Binomial(top, C(n2))
    # e sits on the larger side as a lower bound and on the smaller side as an upper bound
    def e_bound(e):
        return Pow(Mul((e, top, C(Fraction(1, n2)))), C(n2))

    step("C(n^2+D, n^2) <= (e(n^2+D)/n^2)^(n^2)", binom, e_bound(e_lo))
    def e_sum(e):
        return Pow(Add((e, Mul((C(3), e, Pow(T, half6))))), C(n2))

    step("(e(n^2+D)/n^2)^(n^2) <= (e + 3e(2n^3)^(148.5n^6))^(n^2)", e_bound(e_hi), e_sum(e_lo))
    Y = Mul((Pow(C(18), C(n2)), Pow(T, half8)))
    step("(e + 3e(2n^3)^(148.5n^6))^(n^2) <= 18^(n^2) (2n^3)^(148.5n^8)", e_sum(e_hi), Y)

    B = _binom_D(n)
    d1 = bound_d1(n)
    step("d1 <= (2^C(n^2+D, D))^2", d1, Pow(Pow(C(2), B), C(2)))
    step("(2^C(n^2+D, D))^2 <= (2^(18^(n^2) (2n^3)^(148.5n^8)))^2",
         Pow(Pow(C(2), B), C(2)), Pow(Pow(C(2), Y), C(2)))
    step("(2^(18^(n^2) (2n^3)^(148.5n^8)))^2 <= (2^((2n^3)^(149n^8)))^2",
         Pow(Pow(C(2), Y), C(2)), Pow(Pow(C(2), X), C(2)))
    step("(2^((2n^3)^(149n^8)))^2 <= 4^((2n^3)^(149n^8))", Pow(Pow(C(2), X), C(2)), four_X)

    d2_upper = Mul((four_X, D_upper, Y))
    d2_merged = Mul((C(3 * n2), Pow(C(18), C(n2)), four_X, Pow(T, Add((half8, half6)))))
    step("d2 <= 4^X 3n^2 (2n^3)^(148.5n^6) 18^(n^2) (2n^3)^(148.5n^8)", bound_d2(n), d2_upper)
    step("4^X 3n^2 (2n^3)^(148.5n^6) 18^(n^2) (2n^3)^(148.5n^8) = 3n^2 18^(n^2) 4^X (2n^3)^(148.5n^8+148.5n^6)",
         d2_upper, d2_merged, "=")

    big = Pow(T, C(149 * n ** 8 + 149 * n ** 6))
    sixteen_plus = Add((sixteen_X, C(1)))
    lines = [
        Mul((C(3 * n2), Pow(C(18), C(n2)), Pow(T, Add((half8, half6))), four_X, sixteen_plus,
             Pow(C(4), sixteen_plus))),
        Mul((big, four_X, sixteen_plus, Pow(C(4), sixteen_plus))),
        Mul((C(2), big, four_X, sixteen_X, Pow(C(4), sixteen_plus))),
        Mul((C(8), big, four_X, sixteen_X, Pow(C(4), sixteen_X))),
        Pow(C(8), sixteen_X),
    ]
    lines = [Mul((C(n), Pow(inner, p55))) for inner in lines]
    d3_final = Mul((C(n), Pow(C(8), Mul((p55, sixteen_X)))))
    names = ["L1", "L2", "L3", "L4", "L5"]
    step("d3 <= L1", bound_d3(n), lines[0])
    for i in range(len(lines) - 1):
        step(f"{names[i]} <= {names[i + 1]}", lines[i], lines[i + 1])
    step("L5 = n 8^(5.5n^3 16^X)", lines[-1], d3_final, "=")
    step("d3 <= n 8^(5.5n^3 16^X)", bound_d3(n), d3_final)

    k = 2 * n2
    m = _d1_squared_plus_one(n)
    s1 = Pow(Mul((C(8), Pow(C(4), m))), C(Fraction(1, 2)))
    s2 = Mul((Pow(C(32), C(Fraction(1, 2))), Pow(C(2), Pow(C(8), X))))
    dbar_final = Mul((Pow(C(2), C(10 * n2)), Pow(C(4), Mul((C(n2), Pow(C(8), X))))))
    step("dbar <= PD(sqrt(8 4^(d1^2+1)))", bound_dbar(n), PowerDiff(s1, k))
    step("PD(sqrt(8 4^(d1^2+1))) <= PD(sqrt(32) 2^(8^X))", PowerDiff(s1, k), PowerDiff(s2, k))
    step("PD(sqrt(32) 2^(8^X)) <= (2 sqrt(32) 2^(8^X))^(2n^2)",
         PowerDiff(s2, k), Pow(Mul((C(2), s2)), C(k)))
    step("(2 sqrt(32) 2^(8^X))^(2n^2) <= 2^(10n^2) 4^(n^2 8^X)", Pow(Mul((C(2), s2)), C(k)), dbar_final)
    step("dbar <= 2^(10n^2) 4^(n^2 8^X)", bound_dbar(n), dbar_final)

    return [_judge(*s) for s in steps]


def comparison_report() -> List[ChainStep]:
    """Tower comparisons at ``n = 2`` between these bounds and the earlier ones."""
    n = 2
    d_tilde, index = feng_bounds(n)
    d3, dbar = bound_d3(n), bound_dbar(n)
    rows = [
        ("dbar <= 2^2^2^2^18", dbar, tower(2, 2, 2, 2, 18), "<="),
        ("d3 <= 2^2^2^2^18", d3, tower(2, 2, 2, 2, 18), "<="),
        ("I <= 2^2^2^2^2^96", index, tower(2, 2, 2, 2, 2, 96), "<="),
        ("dtilde <= 2^2^2^2^2^2^194", d_tilde, tower(2, 2, 2, 2, 2, 2, 194), "<="),
        ("d3 < dtilde", d3, d_tilde, "<"),
        ("dbar < I", dbar, index, "<"),
    ]
    return [_judge(*r) for r in rows]


def format_steps(steps: List[ChainStep]) -> str:
    width = max(len(s.label) for s in steps)
    lines = [f"{s.label:<{width}}  {s.verdict:<9}  {s.detail}".rstrip() for s in steps]
    return "\n".join(lines)
