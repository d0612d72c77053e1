from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribound.polynomial import (
    NotTriangularError,
    OrderMismatchError,
    Polynomial,
    VariableOrder,
    class_of,
    initial,
    prem,
    pseudo_divide,
)
from tribound.textio import ParseError, parse_polynomial, parse_polynomial_file, parse_polynomial_list

XY = VariableOrder(["x", "y"])
XYZ = VariableOrder(["x", "y", "z"])


def P(text, order=XY):
    return parse_polynomial(text, order)


class TestOrder:
    def test_rejects_duplicates_and_blanks(self):
        with pytest.raises(ValueError):
            VariableOrder(["x", "x"])
        with pytest.raises(ValueError):
            VariableOrder(["x", ""])

    def test_index(self):
        assert XYZ.index("z") == 2
        with pytest.raises(KeyError):
            XYZ.index("w")


class TestClassAndInitial:
    def test_class_of(self):
        assert class_of(P("7")) is None
        assert class_of(P("x*y")) == "y"
        assert class_of(P("x^2 - 1")) == "x"

    def test_initial(self):
        assert initial(P("x*y")) == P("x")
        assert initial(P("x^2 - 1")) == P("1")
        assert initial(P("(x+1)*y^2 + y")) == P("x + 1")

    def test_initial_of_constant_is_an_error(self):
        with pytest.raises(ValueError):
            initial(P("3"))


class TestArithmetic:
    def test_sum(self):
        assert P("x + y") + P("x - y") == P("2*x")

    def test_zero_has_no_terms(self):
        z = P("x - x")
        assert z.is_zero() and z.terms == {}

    def test_evaluate(self):
        assert P("x*y").evaluate([0, -2]) == 0
        assert P("y").evaluate([0, -2]) == -2

    def test_rational_coefficients(self):
        f = P("2*x^2*y - 1/3")
        assert f.evaluate([1, 1]) == Fraction(5, 3)

    def test_order_mismatch(self):
        other = VariableOrder(["x", "y"])
        f = Polynomial.variable(other, 0)
        g = Polynomial.variable(VariableOrder(["y", "x"]), 0)
        with pytest.raises(OrderMismatchError):
            f + g

    def test_reorder_round_trip(self):
        f = P("x^2*y - 3*y + x")
        yx = VariableOrder(["y", "x"])
        g = f.reorder(yx)
        assert g.evaluate([2, 5]) == f.evaluate([5, 2])
        assert g.reorder(XY) == f

    def test_reorder_drops_unused_variables_only(self):
        f = P("x + 1", XYZ)
        assert f.reorder(VariableOrder(["x"])) == parse_polynomial("x + 1", VariableOrder(["x"]))
        with pytest.raises(KeyError):
            P("y", XYZ).reorder(VariableOrder(["x"]))

    def test_substitute(self):
        f = P("x*y + 1")
        g = f.substitute({0: P("y + 1"), 1: P("y")})
        assert g == P("y^2 + y + 1")


class TestPseudoDivision:
    def test_rep_counterexamples(self):
        assert prem(P("y"), [P("x*y")]).is_zero()
        assert prem(P("y"), [P("x"), P("x*y")]).is_zero()
        assert prem(P("y + 1"), [P("x"), P("x*y")]).is_zero()
        assert prem(P("-1"), [P("x"), P("x*y")]) == P("-1")

    def test_empty_set(self):
        f = P("x^3 + y")
        assert prem(f, []) == f

    def test_pseudo_divide_by_xy(self):
        r = pseudo_divide(P("y"), [P("x*y")])
        assert r.remainder.is_zero()
        assert r.quotients == [P("1")]
        assert r.initial_exponents == [1]

    def test_monic_division(self):
        X = VariableOrder(["x"])
        r = pseudo_divide(parse_polynomial("x^3", X), [parse_polynomial("x^2 - 1", X)])
        assert r.remainder == parse_polynomial("x", X)
        assert r.quotients == [parse_polynomial("x", X)]
        assert r.check(parse_polynomial("x^3", X))

    def test_constant_is_reduced(self):
        assert prem(P("5"), [P("x^2 - 1"), P("x*y - 1")]) == P("5")

    def test_non_triangular_is_rejected(self):
        with pytest.raises(NotTriangularError):
            prem(P("y"), [P("x*y"), P("x")])


class TestTextFormat:
    def test_file(self):
        order, polys = parse_polynomial_file("# comment\nvars: x, y\n2*x^2*y - 1/3\nx y + 1  # implicit product\n")
        assert order.names == ("x", "y")
        assert polys[1] == P("x*y + 1")

    def test_empty_file(self):
        order, polys = parse_polynomial_file("")
        assert len(order) == 0 and polys == []

    def test_error_positions(self):
        with pytest.raises(ParseError) as err:
            parse_polynomial_file("vars: x,y\nx + \n")
        assert err.value.line == 2
        with pytest.raises(ParseError) as err:
            parse_polynomial_file("vars: x,y\nx + w\n")
        assert (err.value.line, err.value.column) == (2, 5)

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_polynomial_file("x + y\n")

    def test_inline_list(self):
        assert parse_polynomial_list("x; x*y", XY) == [P("x"), P("x*y")]

    def test_print_round_trip(self):
        f = P("2*x^2*y - 1/3*x + y^3 - 7")
        assert P(str(f)) == f


# -- properties -----------------------------------------------------------------

coef = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@st.composite
def polys(draw, order=XYZ, max_deg=3, max_terms=4):
    n = len(order)
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda e: sum(e) <= max_deg),
        coef, max_size=max_terms))
    return Polynomial(order, terms)


@st.composite
def triangular(draw, order=XYZ):
    members = []
    for i in range(len(order)):
        if draw(st.booleans()):
            body = draw(polys(order, 2, 3))
            lead = draw(polys(VariableOrder(order.names[:i]) if i else VariableOrder([]), 1, 2))
            lead_full = Polynomial(order, {e + (0,) * (len(order) - i): c for e, c in lead.terms.items()}) \
                if i else Polynomial.constant(order, 1)
            if lead_full.is_zero():
                lead_full = Polynomial.constant(order, 1)
            k = draw(st.integers(1, 2))
            g = lead_full * Polynomial.variable(order, i) ** k
            # keep the tail below degree k in the main variable
            tail = Polynomial(order, {e: c for e, c in body.terms.items()
                                      if e[i] < k and all(v == 0 for v in e[i + 1:])})
            members.append(g + tail)
    return members


@settings(max_examples=150, deadline=None)
@given(polys(), triangular())
def test_pseudo_division_identity(f, G):
    r = pseudo_divide(f, G)
    assert r.check(f)
    for g in G:
        i = g.class_index()
        assert r.remainder.degree(i) < g.degree(i)


@settings(max_examples=100, deadline=None)
@given(polys(), triangular())
def test_prem_idempotent(f, G):
    r = prem(f, G)
    assert prem(r, G) == r


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), st.tuples(coef, coef, coef))
def test_evaluate_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
