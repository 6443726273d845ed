"""Spectrum window and BFS engine tests.

The completeness oracle is an independent brute-force loop over all digit
strings up to a degree cap; engine output must match it exactly (set
equality of canonical vectors in exact mode).
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest

from qspectra.algebraic import AlgebraicNumber
from qspectra.errors import PreconditionError
from qspectra.intpoly import IntPolynomial
from qspectra.spectrum import (
    L_estimate,
    enumerate_A,
    enumerate_X,
    enumerate_Y,
    gap_report,
    l_estimate,
    min_positive_bfs,
)

PHI_POLY = IntPolynomial([-1, -1, 1])
SQRT2_POLY = IntPolynomial([-2, 0, 1])


def phi():
    return AlgebraicNumber.base_from_poly(PHI_POLY, root_index=0)


def sqrt2():
    return AlgebraicNumber.base_from_poly(SQRT2_POLY, root_index=0)


def brute_force_values(q: AlgebraicNumber, alphabet, max_degree: int):
    """All canonical vectors of digit strings over the alphabet with degree
    <= max_degree (exact mode), via direct canonicalization."""
    ctx = q.zq_context()
    out = set()
    for n in range(max_degree + 1):
        for digits in itertools.product(alphabet, repeat=n + 1):
            out.add(ctx.from_digits(digits))
    return out


# -- X windows ---------------------------------------------------------------


def test_X_base2_binary():
    q = AlgebraicNumber.from_rational(2)
    w = enumerate_X(q, 1, 7)
    assert w.values() == [0, 1, 2, 3, 4, 5, 6, 7]
    assert w.complete


def test_X_base3_digits_0_to_2():
    q = AlgebraicNumber.from_rational(3)
    w = enumerate_X(q, 2, 8)
    assert w.values() == list(range(9))


def test_X_phi_small_window():
    w = enumerate_X(phi(), 1, 2)
    assert len(w.points) == 3
    assert w.values()[0] == 0
    assert abs(w.values()[1] - 1) < 1e-12
    assert abs(w.values()[2] - 1.6180339887) < 1e-9


def test_X_first_point_is_zero_with_witness():
    w = enumerate_X(sqrt2(), 1, 5)
    assert w.points[0].value == 0
    assert w.points[0].digits == (0,)


def test_X_window_is_strictly_increasing_and_deduplicated():
    w = enumerate_X(sqrt2(), 1, 12)
    vals = w.values()
    assert all(a < b for a, b in zip(vals, vals[1:]))
    vecs = [p.vec for p in w.points]
    assert len(set(vecs)) == len(vecs)


def test_X_matches_brute_force_oracle():
    q = phi()
    ctx = q.zq_context()
    B = Fraction(6)
    w = enumerate_X(q, 1, B)
    # oracle: degree <= log_phi 6 < 4; enumerate all strings of degree <= 5
    oracle = set()
    for vec in brute_force_values(q, (0, 1), 5):
        scaled = [x for x in vec]
        scaled[0] -= 6
        if ctx.sign(tuple(scaled)) <= 0 and ctx.sign(vec) >= 0:
            oracle.add(vec)
    assert {p.vec for p in w.points} == oracle


def test_X_nesting_in_m():
    q = sqrt2()
    w1 = enumerate_X(q, 1, 9)
    w2 = enumerate_X(q, 2, 9)
    assert {p.vec for p in w1.points} <= {p.vec for p in w2.points}


def test_X_budget_flags_incomplete():
    w = enumerate_X(sqrt2(), 1, 50, budget=10)
    assert not w.complete


# -- Y windows ----------------------------------------------------------------


def test_Y_sqrt2_minimal_positive_element():
    w = enumerate_Y(sqrt2(), 1, 3, 1)
    positives = [p for p in w.points if p.value > 1e-12]
    assert positives
    least = positives[0]
    assert abs(least.value - (3 - 2 * math.sqrt(2))) < 1e-12
    assert least.vec == (3, -2)
    assert least.digits == (1, 0, 1, -1)


def test_Y_balanced_ternary_complete():
    q = AlgebraicNumber.from_rational(3)
    w = enumerate_Y(q, 1, 2, 13)
    assert w.values() == list(range(-13, 14))
    assert w.complete  # de Vries bound applies: 3 > 1+1 and 3^3*(1/2) > 13


def test_Y_symmetry_and_zero():
    for q in (sqrt2(), phi()):
        w = enumerate_Y(q, 1, 3, 2)
        vals = w.values()
        assert any(abs(v) < 1e-12 for v in vals)
        for v in vals:
            assert any(abs(v + u) < 1e-9 for u in vals)


def test_Y_matches_brute_force_oracle():
    q = sqrt2()
    n, B = 4, Fraction(3)
    w = enumerate_Y(q, 1, n, B)
    ctx = q.zq_context()
    oracle = set()
    for digits in itertools.product((-1, 0, 1), repeat=n + 1):
        vec = ctx.from_digits(digits)
        lo, hi = q.value_interval_of_vec(vec)
        if -B <= lo <= B or -B <= hi <= B or (lo < -B and hi > B):
            # exact in-range test
            scaled_hi = [x for x in vec]
            scaled_hi[0] -= 3
            scaled_lo = [x for x in vec]
            scaled_lo[0] += 3
            if ctx.sign(tuple(scaled_hi)) <= 0 and ctx.sign(tuple(scaled_lo)) >= 0:
                oracle.add(vec)
    assert {p.vec for p in w.points} == oracle


def test_Y_nesting_in_degree():
    q = phi()
    w3 = enumerate_Y(q, 1, 3, 4)
    w4 = enumerate_Y(q, 1, 4, 4)
    assert {p.vec for p in w3.points} <= {p.vec for p in w4.points}


def test_Y_shift_closure_property():
    q = sqrt2()
    m, n, B = 1, 3, 2
    wn = enumerate_Y(q, m, n, B)
    wn1 = enumerate_Y(q, m, n + 1, B)
    ctx = q.zq_context()
    bigger = {p.vec for p in wn1.points}
    for p in wn.points:
        for s in range(-m, m + 1):
            child = ctx.step(p.vec, s)
            # clipped to the bound: only check when |child| <= B
            scaled_hi = [x for x in child]
            scaled_hi[0] -= B
            scaled_lo = [x for x in child]
            scaled_lo[0] += B
            if ctx.sign(tuple(scaled_hi)) <= 0 and ctx.sign(tuple(scaled_lo)) >= 0:
                assert child in bigger


def test_Y_incomplete_without_devries():
    w = enumerate_Y(sqrt2(), 1, 6, 1)
    assert not w.complete  # sqrt2 < m+1: no completeness certificate


# -- A windows -----------------------------------------------------------------


def test_A_base2_odd_integers():
    q = AlgebraicNumber.from_rational(2)
    w = enumerate_A(q, 2, 7)
    assert w.values() == [-7, -5, -3, -1, 1, 3, 5, 7]
    assert abs(w.covering_radius - 1.0) < 1e-12


def test_A_degree_zero():
    w = enumerate_A(AlgebraicNumber.from_rational(Fraction(3, 2)), 0, 2)
    assert w.values() == [-1, 1]


def test_A_rejects_large_base():
    with pytest.raises(PreconditionError):
        enumerate_A(AlgebraicNumber.from_rational(3), 2, 5)


def test_A_covering_radius_decreases_for_1_35():
    q = AlgebraicNumber.from_rational(Fraction(135, 100))
    radii = []
    for n in range(7, 15):
        w = enumerate_A(q, n, 2)
        radii.append(w.covering_radius)
    assert all(a > b for a, b in zip(radii, radii[1:]))


def test_A_symmetric():
    q = AlgebraicNumber.from_rational(Fraction(27, 20))
    w = enumerate_A(q, 6, 2)
    vals = w.values()
    for v in vals:
        assert any(abs(v + u) < 1e-9 for u in vals)


# -- gaps ------------------------------------------------------------------------


def test_gaps_base2():
    q = AlgebraicNumber.from_rational(2)
    rep = gap_report(enumerate_X(q, 1, 7))
    assert rep.min_gap == 1 == rep.max_gap_tail
    assert rep.count_equal(1.0) == 7


def test_gaps_base3_m2():
    q = AlgebraicNumber.from_rational(3)
    rep = gap_report(enumerate_X(q, 2, 20))
    assert rep.min_gap == 1
    assert rep.max_gap_tail == 1


def test_gaps_phi_two_gap_values():
    # oracle (brute force over digit strings): golden-ratio X windows have
    # exactly the gaps {phi-1, 1}; the liminf proxy is phi-1
    rep = gap_report(enumerate_X(phi(), 1, 20))
    gap_values = sorted(g for g, _ in rep.histogram)
    assert len(gap_values) == 2
    assert abs(gap_values[0] - (1.6180339887498949 - 1)) < 1e-9
    assert abs(gap_values[1] - 1.0) < 1e-9
    assert abs(rep.min_gap - 0.6180339887498949) < 1e-9
    assert rep.min_gap_vec == (-1, 1)


def test_gaps_histogram_mass():
    w = enumerate_X(sqrt2(), 1, 10)
    rep = gap_report(w)
    assert sum(n for _, n in rep.histogram) == len(w.points) - 1


def test_gaps_single_point_rejected():
    w = enumerate_X(phi(), 1, Fraction(1, 2))
    with pytest.raises(PreconditionError):
        gap_report(w)


# -- min positive BFS ---------------------------------------------------------


def test_bfs_lemma21_base3_m2():
    res = min_positive_bfs(AlgebraicNumber.from_rational(3), 2)
    assert res.closed
    assert res.min_positive == 1
    assert [v for v, _ in res.closed_states] == [1]


def test_bfs_phi_closure():
    res = min_positive_bfs(phi(), 1)
    assert res.closed
    states = [vec for _, vec in res.closed_states]
    assert states == [(-1, 1), (1, 0), (0, 1)]  # phi-1 < 1 < phi
    assert res.min_positive_vec == (-1, 1)
    assert abs(res.min_positive - 0.6180339887498949) < 1e-12


def test_bfs_sqrt2_pell_trace():
    res = min_positive_bfs(sqrt2(), 1, max_depth=14)
    assert not res.closed
    mins = {r.min_vec for r in res.trace}
    # Pell convergents: sqrt2-1, 3-2sqrt2, 5sqrt2-7, 17-12sqrt2, 29sqrt2-41
    for vec in [(-1, 1), (3, -2), (-7, 5), (17, -12), (-41, 29)]:
        assert vec in mins
    values = [r.min_value for r in res.trace]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_bfs_soundness_every_state_is_a_digit_string_value():
    q = sqrt2()
    ctx = q.zq_context()
    res = min_positive_bfs(q, 1, max_depth=8)
    for rec in res.trace:
        if rec.min_vec is None:
            continue
        # witness digits evaluate to the reported state
        vec = ctx.from_digits(rec.witness)
        assert vec in (rec.min_vec, ctx.neg(rec.min_vec))


def test_bfs_matches_brute_force_minimum():
    q = sqrt2()
    ctx = q.zq_context()
    m, depth = 1, 6
    res = min_positive_bfs(q, m, max_depth=depth)
    # brute force: min over all strings of degree <= depth-1 within (0, c]
    best = None
    for vec in brute_force_values(q, (-1, 0, 1), depth - 1):
        if ctx.sign(vec) <= 0:
            continue
        w = ctx.sub(ctx.mul_q(vec), vec)
        if ctx.sign(ctx.add_int(w, -m)) > 0:
            continue
        if best is None or ctx.compare(vec, best) < 0:
            best = vec
    assert best == res.trace[depth - 1].min_vec


def test_bfs_budget_exhaustion_returns_partial():
    res = min_positive_bfs(sqrt2(), 1, max_depth=30, state_budget=20)
    assert res.budget_exhausted and not res.closed
    assert len(res.trace) >= 1


def test_bfs_empty_region_closes():
    # q = 4 > m+1 = 3: c = 2/3 < 1, no seeds, closes immediately
    res = min_positive_bfs(AlgebraicNumber.from_rational(4), 2)
    assert res.closed
    assert res.min_positive is None
    assert res.closed_states == ()


# -- estimators -----------------------------------------------------------------


def test_l_estimate_verdicts():
    assert l_estimate(phi(), 1).verdict == "positive-certified"
    assert l_estimate(AlgebraicNumber.from_rational(3), 2).verdict == \
        "positive-certified"
    est = l_estimate(sqrt2(), 1, max_depth=12)
    assert est.verdict == "decreasing"


def test_L_estimate_phi_constant():
    # oracle: unit gaps persist through every golden-ratio window tail
    table = L_estimate(phi(), 1, [10, 20, 40])
    assert table.verdict == "constant"
    assert all(abs(g - 1.0) < 1e-9 for _, g in table.rows)


def test_L_estimate_cbrt2_decreasing():
    q = AlgebraicNumber.base_from_poly(IntPolynomial([-2, 0, 0, 1]),
                                       root_index=0)
    table = L_estimate(q, 1, [10, 30])
    assert table.verdict == "decreasing"


def test_L_estimate_base3_constant_one():
    table = L_estimate(AlgebraicNumber.from_rational(3), 2, [10, 20, 40])
    assert table.verdict == "constant"
    assert all(g == 1 for _, g in table.rows)


# -- determinism -----------------------------------------------------------------


def test_windows_deterministic_across_runs():
    q = sqrt2()
    w1 = enumerate_Y(q, 1, 5, 3)
    w2 = enumerate_Y(q, 1, 5, 3)
    assert [p.to_dict() for p in w1.points] == [p.to_dict() for p in w2.points]


def test_numeric_mode_dedup():
    q = AlgebraicNumber.from_rational(Fraction(9, 5))
    w = enumerate_X(q, 1, 8, tol=1e-9)
    vals = w.values()
    assert all(b - a > 1e-10 for a, b in zip(vals, vals[1:]))
    assert vals[0] == 0.0 and abs(vals[1] - 1.0) < 1e-12


def test_gap_bound_shadow_below_digit_range():
    # for q <= m+1 every consecutive gap in a nonnegative-digit window
    # is at most 1 (+ numeric slack)
    cases = [(phi(), 1, 25), (sqrt2(), 1, 12),
             (AlgebraicNumber.from_rational(2), 1, 16),
             (AlgebraicNumber.from_rational(Fraction("1.8")), 1, 12)]
    for q, m, B in cases:
        w = enumerate_X(q, m, B)
        vals = w.values()
        assert all(b - a <= 1 + 1e-9 for a, b in zip(vals, vals[1:]))


def test_digit_string_kind_validation():
    from qspectra.spectrum import DigitString
    DigitString((0, 1, 1), 1).validate_for_kind("X")
    with pytest.raises(PreconditionError):
        DigitString((0, -1), 1).validate_for_kind("X")
    DigitString((-1, 1), 1).validate_for_kind("A")
    with pytest.raises(PreconditionError):
        DigitString((0, 1), 1).validate_for_kind("A")
    with pytest.raises(PreconditionError):
        DigitString((2,), 1)


def test_closed_state_set_reproduces_itself():
    # closure flag means one more expansion round adds nothing new
    q = phi()
    ctx = q.zq_context()
    res = min_positive_bfs(q, 1)
    assert res.closed
    closed = {vec for _, vec in res.closed_states}
    m, c_test = 1, None
    for vec in closed:
        for s in (-1, 0, 1):
            child = ctx.step(vec, s)
            sign = ctx.sign(child)
            if sign == 0:
                continue
            if sign < 0:
                child = ctx.neg(child)
            w = ctx.sub(ctx.mul_q(child), child)
            if ctx.sign(ctx.add_int(w, -m)) > 0:
                continue
            assert child in closed
