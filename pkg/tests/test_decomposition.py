import random

import pytest

from tribound.bounds import EQ, LT, compare
from tribound.decomposition import (
    BudgetExceeded,
    DecompositionTask,
    characteristic_set,
    decompose,
    degree_audit,
    membership_radical,
)
from tribound.oracle import OracleInapplicable, oracle_membership
from tribound.polynomial import Polynomial, VariableOrder, poly_gcd, prem
from tribound.textio import parse_polynomial
from tribound.triangular import TriangularRepresentation, representation_product

from corpus import SYSTEMS, load, query_panel, random_poly

XY = VariableOrder(["x", "y"])


def P(text, order=XY):
    return parse_polynomial(text, order)


def run(*texts, order=XY, **kw):
    return decompose(DecompositionTask([P(t, order) for t in texts], order, **kw))


class TestExamples:
    def test_two_points(self):
        R = run("x^2 - 1", "y - x")
        assert membership_radical(P("y^2 - 1"), R)
        assert not membership_radical(P("y - 1"), R)
        for pt in ([1, 1], [-1, -1]):
            assert R.contains_point(pt)
        assert not R.contains_point([1, -1])

    def test_line_not_rep_of_input(self):
        R = run("x", "x*y")
        assert [c.members for c in R.components] == [(P("x"),)]
        assert not membership_radical(P("y"), R)

    def test_no_generators(self):
        R = decompose(DecompositionTask([], XY))
        assert R.components == () and not R.unit

    def test_inconsistent(self):
        assert run("1").unit
        assert run("x", "x - 1").unit

    def test_double_point(self):
        R = run("x^2")
        assert membership_radical(P("x"), R)
        assert not membership_radical(P("y"), R)

    def test_members_are_primitive(self):
        # x*z and y*z: the z-plane member is z itself, not x*z
        XYZ = VariableOrder(["x", "y", "z"])
        R = run("x*z", "y*z", order=XYZ)
        for c in R.components:
            for m in c.members:
                i = m.class_index()
                content = None
                for coeff in m.coefficients_in(i).values():
                    content = coeff if content is None else poly_gcd(content, coeff)
                assert content.is_constant()


class TestCharacteristicSet:
    def test_picks_lowest_rank(self):
        C = characteristic_set([P("x^2 - 1"), P("y - x"), P("x + y")])
        assert C.members[0] == P("x^2 - 1")
        assert len(C.members) == 2 and C.members[1].degree(1) == 1

    def test_completion_finds_inconsistency(self):
        with pytest.raises(ValueError):
            characteristic_set([P("x^2 - 1"), P("y - x"), P("x + y")], complete=True)
        C = characteristic_set([P("x^2 - 1"), P("x*y - 1"), P("y^2 - 1")], complete=True)
        assert [m.class_index() for m in C.members] == [0, 1]

    def test_singleton(self):
        assert characteristic_set([P("x*y - 1")]).members == (P("x*y - 1"),)

    def test_constant_signals_inconsistency(self):
        with pytest.raises(ValueError):
            characteristic_set([P("3"), P("x")])


class TestTaskValidation:
    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            DecompositionTask([P("0")], XY)
        with pytest.raises(ValueError):
            DecompositionTask([P("x")], XY, inequations=[P("0")])

    def test_rejects_bad_budget(self):
        with pytest.raises(ValueError):
            DecompositionTask([P("x")], XY, max_steps=0)

    def test_budget_exhaustion(self):
        XYZ = VariableOrder(["x", "y", "z"])
        with pytest.raises(BudgetExceeded) as err:
            run("x^2 + y^2 + z^2 - 1", "x + y + z", order=XYZ, max_steps=2)
        assert "step" in str(err.value)


@pytest.mark.parametrize("system", SYSTEMS, ids=[";".join(s[1]) for s in SYSTEMS])
def test_soundness_and_determinism(system):
    order, gens = load(system)
    R = decompose(DecompositionTask(gens, order))
    if not R.unit:
        for f in gens:
            for c in R.components:
                assert prem(f, c.members).is_zero()
    assert decompose(DecompositionTask(gens, order)) == R


@pytest.mark.parametrize("system", SYSTEMS[:12], ids=[";".join(s[1]) for s in SYSTEMS[:12]])
def test_agrees_with_oracle_on_a_small_panel(system):
    order, gens = load(system)
    R = decompose(DecompositionTask(gens, order))
    panel = query_panel(order, gens, R, random.Random(100), size=25)
    for f in panel:
        assert membership_radical(f, R) == oracle_membership(f, gens, order), str(f)


@pytest.mark.parametrize("system", SYSTEMS, ids=[";".join(s[1]) for s in SYSTEMS])
def test_stability_under_redecomposition(system):
    order, gens = load(system)
    R = decompose(DecompositionTask(gens, order))
    if R.unit:
        return
    parts = [decompose(DecompositionTask(list(c.members), order)) for c in R.components]
    S = parts[0]
    for p in parts[1:]:
        S = representation_product(S, p)
    for f in query_panel(order, gens, R, random.Random(7), size=60):
        assert R.contains(f) == S.contains(f)


class TestInequations:
    def test_pruning(self):
        R = run("x*y", inequations=[P("x")])
        assert all(not prem(P("x"), c.members).is_zero() for c in R.components)
        assert membership_radical(P("y"), R)

    def test_matches_oracle(self):
        gens = [P("x*y - x"), P("x^2 - x")]
        q = [P("x")]
        R = decompose(DecompositionTask(gens, XY, inequations=q))
        rng = random.Random(2)
        for _ in range(40):
            f = random_poly(XY, rng, 3, 3)
            if rng.random() < 0.5:
                f = f * P("y - 1")
            assert membership_radical(f, R) == oracle_membership(f, gens, XY, q)

    def test_everything_pruned(self):
        assert run("x", inequations=[P("x")]).unit


class TestOracle:
    def test_examples(self):
        gens = [P("x^2 - 1"), P("y - x")]
        assert oracle_membership(P("y^2 - 1"), gens, XY)
        assert not oracle_membership(P("y - 1"), gens, XY)
        assert oracle_membership(P("0"), [P("x")], XY)

    def test_inapplicable(self):
        big = VariableOrder(list("abcde"))
        with pytest.raises(OracleInapplicable):
            oracle_membership(Polynomial.variable(big, 0), [Polynomial.variable(big, 1)], big)


class TestDegreeAudit:
    def test_bound_value(self):
        a = degree_audit(run("x^2 - 1", "y - x"), 2, 2)
        assert a.within and a.observed_max == 2
        assert compare(a.bound, 2 ** 45) == EQ

    def test_single_variable_refused(self):
        with pytest.raises(ValueError):
            degree_audit(run("x^2 - 1"), 1, 2)

    def test_zero_degree(self):
        R = TriangularRepresentation.zero_ideal(XY)
        assert degree_audit(R, 2, 0).within

    @pytest.mark.parametrize("system", SYSTEMS, ids=[";".join(s[1]) for s in SYSTEMS])
    def test_corpus_within_bound(self, system):
        order, gens = load(system)
        d = max(g.total_degree() for g in gens)
        R = decompose(DecompositionTask(gens, order))
        a = degree_audit(R, max(len(order), 2), d)
        assert a.within
        assert compare(a.observed_max, a.bound) in (LT, EQ)
