import random
import sys
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribound.bounds import (
    EQ,
    GT,
    LT,
    Add,
    Binomial,
    C,
    CentralBinomialMax,
    Mul,
    ObligationError,
    Pow,
    PowerDiff,
    SchurJ,
    Sub,
    Surd,
    Undecided,
    bound_D,
    bound_d1,
    bound_d2,
    bound_d3,
    bound_dbar,
    compare,
    comparison_report,
    decimal_digits,
    dstar_nstar,
    eval_exact,
    feng_bounds,
    format_steps,
    leq,
    log_profile,
    norm,
    pretty,
    schur_J,
    tower,
    verify_chain,
)
from tribound.bounds.compare import verdict
from tribound.bounds.exact import default_digit_limit

from exprgen import expr, pair


class TestExact:
    def test_schur_at_two(self):
        # sqrt(16) = 4, so the value is 5^8 - 3^8
        assert eval_exact(schur_J(2)) == 5 ** 8 - 3 ** 8 == 384064

    def test_small_power(self):
        assert eval_exact(Pow(C(2), C(10))) == 1024

    def test_D_at_two(self):
        v = eval_exact(bound_D(2))
        assert v == 12 * 2 ** 28512
        old = sys.get_int_max_str_digits()
        sys.set_int_max_str_digits(0)
        try:
            assert decimal_digits(v) == len(str(12 * 2 ** 28512)) == 8585
        finally:
            sys.set_int_max_str_digits(old)

    def test_binomials(self):
        assert eval_exact(Binomial(C(30), C(12))) == comb(30, 12)
        assert eval_exact(CentralBinomialMax(C(5))) == 10
        assert eval_exact(Binomial(C(3), C(5))) == 0

    def test_rational_powers(self):
        assert eval_exact(Pow(C(27), C(Fraction(2, 3)))) == 9
        assert eval_exact(Pow(C(2), C(Fraction(1, 2)))) is None

    def test_surd(self):
        assert eval_exact(Surd(1, 2, 9)) == 7
        assert eval_exact(Surd(1, 2, 8)) is None

    def test_power_difference(self):
        assert eval_exact(PowerDiff(C(3), 2)) == 16 - 4

    def test_digit_limit(self):
        assert eval_exact(Pow(C(10), C(50)), digit_limit=10) is None
        assert eval_exact(tower(2, 2, 2, 2, 18)) is None

    def test_guarded_subtraction(self):
        assert eval_exact(Sub(C(5), C(3))) == 2
        with pytest.raises(ObligationError):
            eval_exact(Sub(C(3), C(5)))

    def test_env_digit_limit(self, monkeypatch):
        monkeypatch.setenv("TRIBOUND_DIGIT_LIMIT", "12")
        assert default_digit_limit() == 12
        assert eval_exact(Pow(C(10), C(20))) is None
        monkeypatch.setenv("TRIBOUND_DIGIT_LIMIT", "junk")
        assert default_digit_limit() == 10 ** 6

    def test_negative_constant_rejected(self):
        with pytest.raises(ValueError):
            C(-1)


class TestNormalize:
    def test_root_of_base(self):
        X = tower(2, 2, 100)
        assert norm(Pow(C(4), X)) == norm(Pow(C(2), Mul((C(2), X))))

    def test_merge_powers(self):
        X = tower(3, 3, 50)
        assert norm(Mul((Pow(C(2), X), Pow(C(2), X)))) == norm(Pow(C(2), Mul((C(2), X))))
        assert norm(Mul((C(2), Pow(C(2), X)))) == norm(Pow(C(2), Add((X, C(1)))))

    def test_flatten_and_sort(self):
        X, Y = tower(2, 2, 90), tower(3, 2, 80)
        assert norm(Add((X, Add((Y, C(1)))))) == norm(Add((C(1), Y, X)))


class TestMagnitude:
    def test_log_profile_depth(self):
        p = log_profile(tower(2, 2, 2, 2, 18))
        assert p.depth == 3 and p.lo <= 2 ** 18 <= p.hi

    def test_small_value(self):
        p = log_profile(C(1000))
        assert p.depth == 0 and p.lo <= 1000 <= p.hi


class TestCompare:
    def test_examples(self):
        assert compare(tower(2, 2, 2, 2, 18), tower(2, 2, 2, 2, 2, 96)) == LT
        assert compare(Pow(C(2), C(10)), C(1024)) == EQ
        assert leq(bound_dbar(2), tower(2, 2, 2, 2, 18))

    def test_plain_numbers(self):
        assert compare(3, 5) == LT and compare(5, 3) == GT

    def test_equal_towers_built_differently(self):
        X = tower(2, 2, 2, 60)
        assert compare(Pow(C(4), X), Pow(C(2), Mul((C(2), X)))) == EQ
        assert compare(Pow(C(4), X), Add((Pow(C(2), Mul((C(2), X))), C(1)))) == LT

    def test_close_towers(self):
        X = tower(2, 2, 2, 70)
        assert compare(Mul((C(3), Pow(C(2), X))), Pow(C(2), Add((X, C(2))))) == LT
        assert compare(Mul((C(5), Pow(C(2), X))), Pow(C(2), Add((X, C(2))))) == GT

    def test_undecided_is_raised_not_guessed(self):
        # log2(3) and 19/12 agree to three digits; no rule relates bases 2 and 3
        X = tower(2, 2, 2, 60)
        a, b = Pow(C(3), X), Pow(C(2), Mul((C(Fraction(19, 12)), X)))
        assert verdict(a, b) is None
        with pytest.raises(Undecided):
            compare(a, b)

    @pytest.mark.parametrize("a,b", [(10, 11), (1000, 999), (123456, 123456)])
    def test_double_towers(self, a, b):
        want = (a > b) - (a < b)
        assert compare(tower(2, 2, 2, a), tower(2, 2, 2, b)) == want


@st.composite
def exact_exprs(draw):
    return expr(random.Random(draw(st.integers(0, 10 ** 9))), draw(st.integers(0, 3)))


@settings(max_examples=300, deadline=None)
@given(exact_exprs(), exact_exprs())
def test_compare_agrees_with_exact_values(a, b):
    va, vb = eval_exact(a), eval_exact(b)
    assert compare(a, b) == (va > vb) - (va < vb)


@settings(max_examples=200, deadline=None)
@given(exact_exprs(), exact_exprs())
def test_antisymmetry(a, b):
    assert compare(a, b) == -compare(b, a)
    assert compare(a, a) == EQ


@settings(max_examples=150, deadline=None)
@given(exact_exprs(), exact_exprs(), exact_exprs())
def test_transitivity(a, b, c):
    ab, bc = compare(a, b), compare(b, c)
    if ab <= 0 and bc <= 0:
        assert compare(a, c) <= 0


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.integers(2, 9), st.integers(2, 9))
def test_symbolic_towers_follow_their_parameters(x, y, b1, b2):
    # b^(2^(2^x)) versus b^(2^(2^y)) with the same base: ordered like x and y
    a, c = Pow(C(b1), tower(2, 2, x)), Pow(C(b1), tower(2, 2, y))
    assert compare(a, c) == (x > y) - (x < y)
    if x != y:
        # the tower height dominates the base
        big, small = (x, y) if x > y else (y, x)
        assert compare(Pow(C(b2), tower(2, 2, big)), Pow(C(b1), tower(2, 2, small))) == GT


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_verdict_with_no_exact_budget_is_sound(seed):
    a, b = pair(random.Random(seed))
    va, vb = eval_exact(a), eval_exact(b)
    v = verdict(a, b, digit_limit=0)
    want = (va > vb) - (va < vb)
    if v in (LT, EQ, GT):
        assert v == want
    elif v == "le":
        assert want <= 0
    elif v == "ge":
        assert want >= 0


class TestFormulas:
    def test_structure(self):
        assert bound_d2(2) == Mul((bound_d1(2), bound_D(2), Binomial(Add((C(4), bound_D(2))), bound_D(2))))
        assert isinstance(bound_dbar(2), SchurJ) and bound_dbar(2).k == 8

    def test_dstar_nstar(self):
        ds, ns = dstar_nstar(2, 1)
        assert eval_exact(ds) == comb(5, 2) ** 2 == 100
        assert eval_exact(ns) == 500
        with pytest.raises(ValueError):
            dstar_nstar(2, 0)

    def test_rejects_small_n(self):
        for f in (bound_D, bound_d1, bound_d3, bound_dbar, feng_bounds):
            with pytest.raises(ValueError):
                f(1)

    def test_schur_values(self):
        # (sqrt(8)+1)^2 - (sqrt(8)-1)^2 = 4 sqrt(8), about 11.31
        assert eval_exact(schur_J(1)) == 12
        with pytest.raises(ValueError):
            schur_J(0)

    def test_tower(self):
        assert tower(2, 3, 2) == Pow(C(2), Pow(C(3), C(2)))
        assert eval_exact(tower(2, 3, 2)) == 512

    def test_feng_towers(self):
        d_tilde, index = feng_bounds(2)
        assert compare(d_tilde, tower(2, 2, 2, 2, 2, 2, 194)) in (LT, EQ)
        assert compare(index, tower(2, 2, 2, 2, 2, 96)) in (LT, EQ)
        assert compare(bound_d3(2), d_tilde) == LT

    def test_chain_at_two(self):
        steps = verify_chain(2)
        assert len(steps) == 22
        assert all(s.verdict == "holds" for s in steps), format_steps(steps)
        labels = [s.label for s in steps]
        assert "D <= 3n^2 (2n^3)^(148.5n^6)" in labels

    def test_report(self):
        rows = comparison_report()
        assert [r.verdict for r in rows] == ["holds"] * 6
        assert "d3 < dtilde" in format_steps(rows)

    def test_pretty(self):
        assert pretty(Pow(C(2), C(10))) == "2^10"
        assert pretty(C(2) ** 100) == "2^100"
