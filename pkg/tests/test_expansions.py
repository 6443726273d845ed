"""Expansion algorithm tests.

Oracles: direct float implementations of the greedy/lazy rules, geometric
series closed forms for capacities, and the tail-bound arithmetic checked
numerically at high precision.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from qspectra.algebraic import AlgebraicNumber
from qspectra.errors import PreconditionError
from qspectra.intpoly import IntPolynomial
from qspectra.expansions import (
    DigitSequence,
    SignPattern,
    greedy_expansion,
    lazy_constrained,
    periodic_completion,
    verify_expansion,
)

PHI_POLY = IntPolynomial([-1, -1, 1])


def phi():
    return AlgebraicNumber.base_from_poly(PHI_POLY, root_index=0)


def rational(x) -> AlgebraicNumber:
    return AlgebraicNumber.from_rational(Fraction(x))


# -- sign patterns -----------------------------------------------------------


def test_pattern_parse_round_trip():
    p = SignPattern.from_text("explicit:2,4;eventual:in;threshold:6")
    assert p.explicit == frozenset({2, 4})
    assert p.eventual == "in"
    assert p.threshold == 6
    assert SignPattern.from_text(p.to_text()) == p


def test_pattern_membership():
    p = SignPattern(frozenset({2, 4}), 6, "in")
    assert [p.contains(i) for i in range(1, 9)] == [
        False, True, False, True, False, True, True, True]
    q = SignPattern(frozenset({1}), 3, "out")
    assert [q.contains(i) for i in range(1, 6)] == [
        True, False, False, False, False]


def test_pattern_unknown_blocks_beyond_horizon():
    p = SignPattern.from_membership([1, 3], horizon=5)
    assert p.contains(3) and not p.contains(4)
    with pytest.raises(PreconditionError):
        p.contains(6)


def test_pattern_rejects_bad_explicit():
    with pytest.raises(PreconditionError):
        SignPattern(frozenset({7}), 3, "in")


# -- greedy ------------------------------------------------------------------


def test_greedy_one_at_phi_terminates_exactly():
    seq = greedy_expansion(1, phi(), 1, 12)
    assert seq.preperiod == (1, 1) + (0,) * 10
    assert seq.exact_zero_tail
    assert seq.meta["zero_from"] == 2


def test_greedy_zero():
    seq = greedy_expansion(0, rational(Fraction(3, 2)), 1, 8)
    assert seq.preperiod == (0,) * 8
    assert seq.exact_zero_tail


def test_greedy_remainder_invariant_numeric():
    # digits from the exact path must reproduce x with the documented
    # remainder bound; independent float check
    q = rational(Fraction("1.9"))
    seq = greedy_expansion(1, q, 1, 40)
    qf = 1.9
    partial = sum(c * qf ** -(i + 1) for i, c in enumerate(seq.preperiod))
    assert 0 <= 1 - partial <= qf ** -40 * (1 / 0.9) + 1e-15


def test_greedy_matches_float_oracle_random():
    rng = random.Random(11)
    for _ in range(25):
        qf = Fraction(rng.randint(11, 29), 10)
        m = rng.randint(int(qf), 4)           # m >= q-1 so range is decent
        x = Fraction(rng.randint(0, 100), 100) * m / (qf - 1)
        q = rational(qf)
        seq = greedy_expansion(x, q, m, 18)
        # float oracle of the greedy rule
        r = float(x)
        want = []
        for k in range(1, 19):
            c = min(m, int(r * float(qf) ** k + 1e-9))
            want.append(c)
            r -= c * float(qf) ** -k
        assert list(seq.preperiod) == want


def test_greedy_range_check():
    with pytest.raises(PreconditionError):
        greedy_expansion(3, rational(Fraction(3, 2)), 1, 5)  # 3 > m/(q-1)=2
    with pytest.raises(PreconditionError):
        greedy_expansion(-1, rational(2), 1, 5)


# -- verify ------------------------------------------------------------------


def test_verify_greedy_phi_residual_zero():
    q = phi()
    seq = greedy_expansion(1, q, 1, 12)
    cert = verify_expansion(seq, q, 1, 12)
    assert cert.exact_zero
    assert cert.passed
    assert cert.residual == 0


def test_verify_single_negative_digit():
    # s_0 = -1 truncated at N=0 against target 0: residual 1, tail m/(q-1)
    seq = DigitSequence(preperiod=(-1,), height=1, first_index=0)
    q = rational(Fraction(3, 2))
    cert = verify_expansion(seq, q, 0, 0)
    assert abs(cert.residual - 1.0) < 1e-12
    assert abs(cert.tail_bound - 2.0) < 1e-12
    assert cert.passed  # m/(q-1) = 2 >= 1
    q2 = rational(Fraction(5, 2))   # m/(q-1) = 2/3 < 1
    cert2 = verify_expansion(seq, q2, 0, 0)
    assert not cert2.passed


# -- lazy constrained ---------------------------------------------------------


def test_lazy_all_indices_q15():
    q = rational(Fraction(3, 2))
    seq = lazy_constrained(q, 1, SignPattern.all_indices(), 40)
    assert seq.preperiod[0] == -1
    assert all(s in (0, 1) for s in seq.preperiod[1:])
    cert = verify_expansion(seq, q, 0, 40)
    assert cert.passed
    # residual <= 1.5^-40 * 2
    assert cert.residual <= 1.5 ** -40 * 2 + 1e-18


def test_lazy_even_indices_q12():
    # P = even indices materialized below threshold 44, eventually out;
    # capacity m/(q^2-1) ~ 2.27 certified via the truncated sum
    q = rational(Fraction(6, 5))
    pattern = SignPattern(frozenset(range(2, 44, 2)), 44, "out")
    seq = lazy_constrained(q, 1, pattern, 40)
    for i, s in enumerate(seq.preperiod):
        if i == 0:
            assert s == -1
        elif pattern.contains(i):
            assert 0 <= s <= 1
        else:
            assert -1 <= s <= 0
    assert verify_expansion(seq, q, 0, 40).passed


def test_lazy_capacity_rejection():
    # q=1.9, m=1, P={1}: capacity 1/1.9 < 1
    q = rational(Fraction(19, 10))
    with pytest.raises(PreconditionError) as err:
        lazy_constrained(q, 1, SignPattern(frozenset({1}), 2, "out"), 20)
    assert "capacity" in str(err.value)


def test_lazy_requires_digit_surplus():
    with pytest.raises(PreconditionError):
        lazy_constrained(rational(Fraction(5, 2)), 1,
                         SignPattern.all_indices(), 10)


def test_lazy_agrees_with_classical_lazy_oracle():
    # P = all indices, target 1: the corridor rule with minimal digits is
    # the classical lazy expansion; float oracle of the classical rule
    for qf in (Fraction(3, 2), Fraction(17, 10), Fraction(13, 10)):
        q = rational(qf)
        seq = lazy_constrained(q, 1, SignPattern.all_indices(), 30)
        got = list(seq.preperiod[1:])
        x = 1.0
        qq = float(qf)
        cap = 1 / (qq - 1)
        want = []
        for k in range(1, 31):
            # lazy: smallest digit leaving the rest reachable
            c = 0 if x <= cap * qq ** -k else 1
            x -= c * qq ** -k
            want.append(c)
        assert got == want, qf


def test_lazy_exact_boundary_at_phi():
    # capacity for P = {1, 2} at the golden ratio is exactly one:
    # phi^-1 + phi^-2 = 1; the exact kernel must accept, not dither
    q = phi()
    pattern = SignPattern(frozenset({1, 2}), 3, "out")
    seq = lazy_constrained(q, 1, pattern, 12)
    assert seq.preperiod[0] == -1
    assert seq.preperiod[1] == 1 and seq.preperiod[2] == 1
    assert seq.exact_zero_tail
    assert verify_expansion(seq, q, 0, 12).exact_zero


def test_lazy_property_suite_random_patterns():
    rng = random.Random(42)
    accepted = 0
    for _ in range(50):
        qf = Fraction(rng.randint(105, 195), 100)
        m = rng.randint(1, 3)
        if qf >= m + 1:
            continue
        kind = rng.choice(["in", "out"])
        explicit = frozenset(i for i in range(1, 12) if rng.random() < 0.5)
        threshold = 12
        pattern = SignPattern(explicit, threshold, kind)
        q = rational(qf)
        try:
            seq = lazy_constrained(q, m, pattern, 80)
        except PreconditionError:
            # rejection must coincide with certified capacity < 1
            cap = sum(float(qf) ** -i for i in explicit)
            if kind == "in":
                cap += float(qf) ** -threshold * float(qf) / (float(qf) - 1)
            assert m * cap < 1 + 1e-9
            continue
        accepted += 1
        for i, s in enumerate(seq.preperiod):
            if i == 0:
                assert s == -1
            elif pattern.contains(i):
                assert 0 <= s <= m
            else:
                assert -m <= s <= 0
        assert verify_expansion(seq, q, 0, 80).passed
    assert accepted >= 20


# -- periodic completion -------------------------------------------------------


def test_periodic_completion_phi():
    # (-1, 1, 1): -1 + phi^-1 + phi^-2 = 0
    q = phi()
    seq = periodic_completion([-1, 1, 1], q, 1)
    assert seq.period == (-1, 1, 1)
    assert seq.meta["digit_sum"] == 1
    assert seq.digit(0) == -1 and seq.digit(3) == -1 and seq.digit(4) == 1


def test_periodic_completion_zero_string():
    seq = periodic_completion([0, 0], rational(2), 1)
    assert seq.is_finitely_supported


def test_periodic_completion_rejects_nonzero():
    with pytest.raises(PreconditionError):
        periodic_completion([-1, 1], rational(Fraction(3, 2)), 1)


# -- corridor invariant property ------------------------------------------------


def test_corridor_invariant_holds_along_run():
    # after each step the remaining target must sit between the tail
    # capacities; checked numerically from the emitted digits
    qf = Fraction(14, 10)
    q = rational(qf)
    pattern = SignPattern(frozenset({1, 2, 3, 5, 8, 13}), 21, "in")
    seq = lazy_constrained(q, 2, pattern, 60)
    qq = float(qf)
    t = 1.0
    for k in range(1, 41):
        t -= seq.digit(k) * qq ** -k
        up = sum(2 * qq ** -i for i in range(k + 1, 61) if pattern.contains(i))
        up += 2 * qq ** -61 / (qq - 1)
        dn = -sum(2 * qq ** -i for i in range(k + 1, 61)
                  if not pattern.contains(i))
        dn -= 2 * qq ** -61 / (qq - 1)
        assert dn - 1e-9 <= t <= up + 1e-9


def test_greedy_remainder_bound_random():
    # r_k <= q^-k m/(q-1) along the whole run (float recomputation)
    rng = random.Random(3)
    for _ in range(15):
        qf = Fraction(rng.randint(110, 190), 100)
        m = 1
        x = Fraction(rng.randint(0, 50), 50) * m / (qf - 1)
        seq = greedy_expansion(x, rational(qf), m, 25)
        q = float(qf)
        r = float(x)
        for k, c in enumerate(seq.preperiod, start=1):
            r -= c * q**-k
            assert -1e-12 <= r <= q**-k * m / (q - 1) + 1e-12
