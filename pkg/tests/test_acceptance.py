"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its runtime,
written straight to the terminal so it shows up without ``-s``.
"""
import random
import sys
import time
from fractions import Fraction

import pytest
import sympy

from tribound.bounds import (
    Undecided,
    bound_D,
    compare,
    comparison_report,
    decimal_digits,
    eval_exact,
    schur_J,
    verify_chain,
)
from tribound.decomposition import DecompositionTask, decompose, degree_audit, membership_radical
from tribound.groups import (
    OneParameterUnipotent,
    RationalHomomorphism,
    determinant,
    parse_group,
    preimage_intersection,
    proto_check,
    random_matrix,
    random_special_linear,
    unipotent_group_equations,
)
from tribound.oracle import oracle_membership, to_sympy
from tribound.polynomial import Polynomial, VariableOrder, prem, pseudo_divide
from tribound.textio import parse_polynomial
from tribound.triangular import representation_restrict

from corpus import SYSTEMS, load, query_panel, random_poly
from exprgen import pair


@pytest.fixture
def report(capsys):
    start = time.perf_counter()

    def emit(n, ok, limit=None, note=""):
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        with capsys.disabled():
            sys.stdout.write(f"\ncriterion {n}: {status}  {elapsed:.2f}s{budget}  {note}\n")
        return ok and within

    return emit


def flat(g):
    return [v for row in g for v in row]


def test_criterion_1_rep_counterexamples(report):
    XY = VariableOrder(["x", "y"])
    P = lambda t: parse_polynomial(t, XY)
    xy, x = P("x*y"), P("x")
    checks = [
        prem(P("y"), [xy]) == P("0"),
        xy.evaluate([0, -2]) == 0,
        P("y").evaluate([0, -2]) == -2,
        prem(P("y"), [x, xy]) == P("0"),
        prem(P("y + 1"), [x, xy]) == P("0"),
        prem(P("-1"), [x, xy]) == P("-1"),
    ]
    assert report(1, all(checks), 1.0, f"{sum(checks)}/6 identities exact")


def _random_triangular(order, rng, max_deg=5):
    members = []
    for i in range(len(order)):
        if rng.random() < 0.35:
            continue
        k = rng.randint(1, max_deg)
        lead = random_poly(order, rng, max_deg - k, 2, vars_used=i) if i else Polynomial.constant(order, 0)
        if lead.is_zero():
            lead = Polynomial.constant(order, rng.choice([1, 2, -3]))
        tail = Polynomial(order, {e: c for e, c in random_poly(order, rng, max_deg, 4, vars_used=i + 1).terms.items()
                                  if e[i] < k})
        members.append(lead * Polynomial.variable(order, i) ** k + tail)
    return members


def test_criterion_2_pseudo_division_identity(report):
    rng = random.Random(2024)
    failures = 0
    for _ in range(1000):
        order = VariableOrder(["x", "y", "z"][: rng.randint(1, 3)])
        G = _random_triangular(order, rng)
        f = random_poly(order, rng, rng.randint(0, 5), rng.randint(1, 6))
        res = pseudo_divide(f, G)
        syms = sympy.symbols(order.names)
        lhs = to_sympy(f, syms)
        for g, a in zip(G, res.initial_exponents):
            lhs *= to_sympy(g.leading_coefficient(g.class_index()), syms) ** a
        rhs = to_sympy(res.remainder, syms)
        for q, g in zip(res.quotients, G):
            rhs += to_sympy(q, syms) * to_sympy(g, syms)
        ok = sympy.expand(lhs - rhs) == 0
        ok = ok and all(res.remainder.degree(g.class_index()) < g.degree(g.class_index()) for g in G)
        ok = ok and prem(f, G) == res.remainder
        failures += not ok
    assert report(2, failures == 0, 30.0, f"{failures} failures in 1000 instances")


def test_criterion_3_decomposition_vs_oracle(report):
    discrepancies, audits_failed, queries = 0, 0, 0
    for k, system in enumerate(SYSTEMS):
        order, gens = load(system)
        R = decompose(DecompositionTask(gens, order))
        for f in query_panel(order, gens, R, random.Random(1000 + k), size=200):
            queries += 1
            discrepancies += membership_radical(f, R) != oracle_membership(f, gens, order)
        d = max(g.total_degree() for g in gens)
        audits_failed += not degree_audit(R, max(len(order), 2), d).within
    ok = discrepancies == 0 and audits_failed == 0 and len(SYSTEMS) >= 20
    note = f"{len(SYSTEMS)} systems, {queries} queries, {discrepancies} discrepancies, {audits_failed} audit failures"
    assert report(3, ok, 300.0, note)


def test_criterion_4_restriction_keeps_low_membership(report):
    rng = random.Random(44)
    failures, checked = 0, 0
    for system in SYSTEMS:
        order, gens = load(system)
        R = decompose(DecompositionTask(gens, order))
        for r in range(1, len(order)):
            low = representation_restrict(R, r)
            low_members = [m for c in low.components for m in c.members]
            for _ in range(100):
                f = random_poly(order, rng, 4, 3, vars_used=r)
                if low_members and rng.random() < 0.5:
                    f = f * rng.choice(low_members)
                checked += 1
                failures += R.contains(f) != low.contains(f)
    assert report(4, failures == 0, None, f"{checked} queries, {failures} failures")


def _classified(R, g):
    return R.contains_point(flat(g))


def test_criterion_5_det_preimage_is_sl2(report):
    R = preimage_intersection(parse_group("GL(2)").presentation(), parse_group("Trivial(1)").presentation(),
                              RationalHomomorphism.det(2))
    SL = parse_group("SL(2)").presentation().representation()
    rng = random.Random(55)
    wrong, inside, outside = 0, 0, 0
    while inside < 50:
        g = random_special_linear(2, rng)
        got = _classified(R, g)
        if got is None:
            continue
        inside += 1
        wrong += got is not True or _classified(SL, g) is False
    while outside < 50:
        g = random_matrix(2, rng)
        if determinant(g) == 1:
            continue
        got = _classified(R, g)
        if got is None:
            continue
        outside += 1
        wrong += got is not False or _classified(SL, g) is True
    assert report(5, wrong == 0, None, f"100 matrices, {wrong} misclassified")


def test_criterion_6_unipotent_desk_instance(report):
    R = unipotent_group_equations([OneParameterUnipotent([[0, 1], [0, 0]])])
    rng = random.Random(66)
    wrong, members, non_members = 0, 0, 0
    while members < 100:
        t = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
        got = R.contains_point([1, t, 0, 1])
        if got is None:
            continue
        members += 1
        wrong += got is not True
    while non_members < 100:
        g = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        if g[0][0] == 1 and g[1][0] == 0 and g[1][1] == 1:
            continue
        got = _classified(R, g)
        if got is None:
            continue
        non_members += 1
        wrong += got is not False
    assert report(6, wrong == 0, None, f"100 members, 100 non-members, {wrong} misclassified")


PROTO_CASES = [
    ("Scalars", "FiniteCyclic(3)", True, None),
    ("GL(2)", "SL(2)", True, None),
    ("SL(2)", "SL(2)", True, None),
    ("GL(2)", "UnipotentUpper(2)", False, "ii"),
    ("SL(2)", "UnipotentUpper(2)", False, "ii"),
    ("GL(2)", "Borel(2)", False, "ii"),
    ("SL(2)", "Borel(2)", False, "i"),
    ("FiniteCyclic(3)", "FiniteCyclic(3)", True, None),
]


def test_criterion_7_proto_catalog(report):
    mismatched = []
    for cand, gal, passed, clause in PROTO_CASES:
        v = proto_check(parse_group(cand), parse_group(gal))
        if v.passed != passed or v.failing_clause != clause or not v.trace:
            mismatched.append(f"{cand}/{gal}")
    note = f"{len(PROTO_CASES) - len(mismatched)}/{len(PROTO_CASES)} verdicts match"
    assert report(7, not mismatched, 1.0, note + (f"; wrong: {mismatched}" if mismatched else ""))


def test_criterion_8_quantitative_reproduction(report):
    rows = comparison_report()
    chains = {n: verify_chain(n) for n in (2, 3, 4)}
    schur = eval_exact(schur_J(2))
    D = eval_exact(bound_D(2))
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        digits_independent = len(str(12 * 2 ** 28512))
    finally:
        sys.set_int_max_str_digits(old)
    checks = {
        "report": all(r.verdict == "holds" for r in rows) and len(rows) == 6,
        "chains": all(s.verdict == "holds" for steps in chains.values() for s in steps),
        "schur": schur == 384064,
        "D(2)": D == 12 * 2 ** 28512,
        "digits": decimal_digits(D) == digits_independent,
    }
    bad = [k for k, v in checks.items() if not v]
    note = f"6 tower comparisons, chains n=2,3,4, J=384064, D(2) has {digits_independent} digits"
    assert report(8, not bad, 60.0, note + (f"; failed: {bad}" if bad else ""))


def test_criterion_9_comparator_coherence(report):
    rng = random.Random(9)
    disagreements, undecided = 0, 0
    for _ in range(10000):
        a, b = pair(rng)
        va, vb = eval_exact(a), eval_exact(b)
        try:
            disagreements += compare(a, b) != (va > vb) - (va < vb)
        except Undecided:
            undecided += 1
    workload = comparison_report() + [s for n in (2, 3, 4) for s in verify_chain(n)]
    workload_undecided = sum(s.verdict == "undecided" for s in workload)
    ok = disagreements == 0 and undecided == 0 and workload_undecided == 0
    note = (f"10000 pairs, {disagreements} disagreements, {undecided} undecided; "
            f"{len(workload)} workload comparisons, {workload_undecided} undecided")
    assert report(9, ok, None, note)
