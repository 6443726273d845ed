"""Witness construction and verdict tests.

Oracles: geometric series identities for the direction-vector partial sums,
direct evaluation of forced-prefix capacities, and brute-force checks of the
digit constraints.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from qspectra.algebraic import AlgebraicNumber
from qspectra.errors import PreconditionError
from qspectra.intpoly import IntPolynomial
from qspectra.witness import (
    accumulation_verdict,
    as_gaussian,
    build_P_and_k,
    build_witness,
    choose_w,
    parse_complex,
)

PHI_POLY = IntPolynomial([-1, -1, 1])
SQRT2_POLY = IntPolynomial([-2, 0, 1])


def phi():
    return AlgebraicNumber.base_from_poly(PHI_POLY, root_index=0)


def q18():
    return AlgebraicNumber.from_rational(Fraction("1.8"))


# -- parsing / direction -----------------------------------------------------


def test_parse_complex():
    assert parse_complex("-1.2") == (Fraction(-6, 5), 0)
    assert parse_complex("0,2") == (0, 2)
    assert parse_complex("0.5,-0.25") == (Fraction(1, 2), Fraction(-1, 4))
    with pytest.raises(PreconditionError):
        parse_complex("fish")


def test_choose_w_negative_real():
    # p = -2: w = 1-p = 3 (scaled w=1); partial sums sum (-1/2)^i stay in
    # [-1/2, -1/4] <= 0 (geometric series oracle)
    d = choose_w("-2", 1)
    assert d.case == "a"
    w = d.w_unit()
    assert abs(w - 1) < 1e-12
    p = -2.0
    acc = 0.0
    for k in range(1, 60):
        acc += (w * p**-k).real
        assert acc <= 1e-15
        assert -0.5 - 1e-12 <= acc <= -0.25 + 1e-12


def test_choose_w_2i_case_a():
    d = choose_w("0,2", 1)
    assert d.case == "a"
    w = d.w_unit()
    want = (1 - 2j) / abs(1 - 2j)
    assert abs(w - want) < 1e-12
    assert w.real > 0
    assert abs(w.real - 1 / math.sqrt(5)) < 1e-12


def test_choose_w_i_rational_angle():
    d = choose_w("0,1", 1)
    assert d.case == "b-rational"
    assert d.period == 4
    w = d.w_unit()
    want = (1 - 1j) / abs(1 - 1j)
    # "near (1-i)/sqrt(2)": unperturbed or a tiny power-of-two rotation
    assert abs(w - want) < 0.1
    # period-wise requirements, float oracle
    for i in range(4):
        assert abs((w * 1j**-i).real) > 1e-9
    acc = 0.0
    for k in range(1, 5):
        acc += (w * 1j**-k).real
        assert acc < w.real


def test_choose_w_shift_case():
    # Re p >= 1, nonreal, |p| > 1: the shifted construction
    d = choose_w("1.5,0.5", 1)
    assert d.case == "a-shift"
    assert d.shift_n is not None and d.shift_n >= 0
    w = d.w_unit()
    assert w.real > 0
    p = complex(1.5, 0.5)
    acc = 0.0
    for k in range(1, 200):
        acc += (w * p**-k).real
        assert acc <= 1e-12


def test_choose_w_direction_validity_random():
    # 100 random companion points with |p| in [1, 3], never positive real:
    # Re w > 0 and nonpositive partial sums up to the horizon
    rng = random.Random(7)
    count = 0
    while count < 100:
        re = Fraction(rng.randint(-300, 300), 100)
        im = Fraction(rng.randint(-300, 300), 100)
        a2 = re * re + im * im
        if a2 < 1 or a2 > 9 or (im == 0 and re >= 0):
            continue
        count += 1
        d = choose_w((re, im), 1)
        w = d.w_unit()
        assert w.real > 0
        p = complex(float(re), float(im))
        if d.case in ("a", "a-shift"):
            acc = 0.0
            for k in range(1, 120):
                acc += (w * p**-k).real
                assert acc <= 1e-9


def test_choose_w_rejections():
    for bad in ("1", "0.5", "2", "0.1,0.2"):
        with pytest.raises(PreconditionError):
            choose_w(bad, 1)


# -- P' and k ----------------------------------------------------------------


def test_build_P_and_k_odd_membership():
    # q=1.8, m=1, p=-2, w=1: P' = odd indices; k small (direct sums oracle)
    q = q18()
    d = choose_w("-2", 1)
    pattern, k, members = build_P_and_k(q, 1, "-2", d.w0, 60)
    assert members[:5] == [1, 3, 5, 7, 9]
    # oracle: capacity(k) = sum_{i<=k} 1.8^-i + sum_{odd i>k} 1.8^-i
    def cap(kk):
        c = sum(1.8**-i for i in range(1, kk + 1))
        c += sum(1.8**-i for i in range(kk + 1, 400) if i % 2 == 1)
        return c
    assert cap(k) >= 1 - 1e-12
    assert k == 0 or cap(k - 1) < 1
    assert k <= 2


def test_build_P_and_k_k0_when_capacity_rich():
    # q = 1.1: odd-index capacity alone ~ 5.24 >= 1, so k = 0
    q = AlgebraicNumber.from_rational(Fraction("1.1"))
    d = choose_w("-2", 1)
    pattern, k, members = build_P_and_k(q, 1, "-2", d.w0, 60)
    assert k == 0


def test_build_P_and_k_requires_window():
    with pytest.raises(PreconditionError):
        build_P_and_k(AlgebraicNumber.from_rational(3), 1, "-2",
                      as_gaussian("3"), 40)


# -- witnesses ----------------------------------------------------------------


def test_witness_step3_q18_pminus12():
    rep = build_witness(q18(), 1, "-1.2", horizon=60)
    assert rep.step == 3
    assert rep.digits()[0] == -1
    # q-residual at the horizon under the tail bound
    assert rep.q_certificate["passed"]
    assert rep.q_residual[-1] <= 1.8**-60 / 0.8 * (1 + 1e-9)
    # certified negative real parts from k on
    assert rep.certified["re_negative_from_k"]
    assert rep.certified["chain_bound_negative"]
    assert all(x < 0 for x in rep.p_re_trace[rep.k:])


def test_witness_step3_digit_structure():
    rep = build_witness(q18(), 1, "-1.2", horizon=60)
    k = rep.k
    digits = rep.digits()
    for j in range(1, k):
        assert digits[j] == 1
    if k > 0:
        assert 1 <= digits[k] <= 1


def test_witness_eq32_compliance():
    rep = build_witness(q18(), 1, "-1.2", horizon=60)
    member_set = set(rep.members) | set(range(1, rep.k + 1))
    digits = rep.digits()
    for i in range(1, 61):
        if i in member_set:
            assert 0 <= digits[i] <= 1
        else:
            assert -1 <= digits[i] <= 0


def test_witness_2i_and_i():
    rep = build_witness(q18(), 1, "0,2", horizon=60)
    assert rep.step == 3
    assert rep.certified["re_negative_from_k"]
    rep_i = build_witness(q18(), 1, "0,1", horizon=60)
    assert rep_i.step == 4
    if rep_i.distinct_moduli is not None:
        assert rep_i.distinct_moduli >= 20
    else:
        assert rep_i.p_re_trace[-1] < -3


def test_witness_step1_real_p():
    rep = build_witness(q18(), 1, "1.3", horizon=60)
    assert rep.step == 1
    assert rep.certified["nonzero"]
    assert rep.q_certificate["passed"]


def test_witness_step2_phi():
    rep = build_witness(phi(), 1, "1", horizon=40)
    assert rep.step == 2
    assert rep.sequence.period == (-1, 1, 1)
    assert rep.certified["digit_sum_per_period"] == 1
    # linear divergence of the digit sums
    assert rep.p_re_trace[-1] >= 40 / 3 - 2


def test_witness_step4_finite_support_replication():
    # phi with p=i: digits (-1,1,1) terminate; replication at multiples of 4
    rep = build_witness(phi(), 1, "0,1", horizon=40)
    assert rep.step == 4
    assert rep.verdict == "divergent-real-part"
    shifts = rep.certified["shifts"]
    assert shifts[0] == 0 and all(s % 4 == 0 for s in shifts)
    assert all(b - a > 2 for a, b in zip(shifts, shifts[1:]))
    assert rep.certified["block_sums_below_half"]
    assert rep.p_re_trace[-1] < -10
    # q-value of the replicated sequence still vanishes
    assert rep.q_certificate["passed"]


def test_witness_q_residual_tail_bound_every_N():
    rep = build_witness(q18(), 1, "-1.2", horizon=50)
    qf = 1.8
    for N, r in enumerate(rep.q_residual):
        assert r <= 1 * qf ** -N / (qf - 1) * (1 + 1e-9)


def test_witness_rejects_bad_p():
    with pytest.raises(PreconditionError):
        build_witness(q18(), 1, "0.5", horizon=40)
    with pytest.raises(PreconditionError):
        build_witness(q18(), 1, "1.8", horizon=40)   # p == q
    with pytest.raises(PreconditionError):
        build_witness(AlgebraicNumber.from_rational(3), 1, "-2", horizon=40)


# -- verdicts -----------------------------------------------------------------


def test_verdict_examples():
    assert accumulation_verdict(phi(), 1).verdict == "Discrete"
    assert accumulation_verdict(phi(), 1).reason == "Pisot"
    sqrt2 = AlgebraicNumber.base_from_poly(SQRT2_POLY, root_index=0)
    v = accumulation_verdict(sqrt2, 1)
    assert v.verdict == "Accumulates"
    v3 = accumulation_verdict(AlgebraicNumber.from_rational(3), 2)
    assert v3.verdict == "Discrete" and v3.reason == "q>=m+1"


def test_verdict_cross_checks():
    v = accumulation_verdict(phi(), 1)
    assert v.cross_check["bfs"]["closed"]
    v3 = accumulation_verdict(AlgebraicNumber.from_rational(3), 2)
    assert v3.cross_check["bfs"]["min_positive"] == 1
    # q = 3 = m+1 exactly: growth bound does not apply, closure does
    assert v3.cross_check["devries"]["applies"] is False
    v4 = accumulation_verdict(AlgebraicNumber.from_rational(4), 2)
    assert v4.cross_check["devries"]["applies"] is True
    sqrt2 = AlgebraicNumber.base_from_poly(SQRT2_POLY, root_index=0)
    va = accumulation_verdict(sqrt2, 1)
    trace = va.cross_check["bfs"]["trace"]
    assert trace[-1] < trace[3] / 5


def test_verdict_rational_nonintegers_accumulate():
    v = accumulation_verdict(AlgebraicNumber.from_rational(Fraction("1.8")), 1)
    assert v.verdict == "Accumulates"
    assert v.classification == "NotAlgebraicInteger"
