"""Acceptance suite: one test per headline criterion, each printing a
PASS/FAIL line, checking exact values at their stated tolerances and the
stated runtime caps.

Run with `pytest tests/test_acceptance.py -v -s` to see all lines.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

from qspectra.algebraic import AlgebraicNumber, classify_base, power_base
from qspectra.intpoly import IntPolynomial
from qspectra.reproduce import (
    CASES,
    case_base3_unit_gap,
    case_golden_closure,
    case_lazy_contract,
    case_oracle_equivalence,
    case_pm_one_density,
    case_sidorov_solomyak_window,
    case_sqrt2_descent,
    case_verdict_corpus,
    case_witness_certificates,
    run_case,
)


def _report(criterion: str, passed: bool, runtime: float, limit: float,
            detail: str = ""):
    mark = "PASS" if passed and runtime < limit else "FAIL"
    print(f"{mark} {criterion}: {runtime:.2f}s (limit {limit:.0f}s) {detail}")
    assert passed, f"{criterion} failed: {detail}"
    assert runtime < limit, f"{criterion} exceeded {limit}s ({runtime:.2f}s)"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_integer_base_unit_minimum():
    out, dt = _timed(case_base3_unit_gap)
    _report("criterion-01 integer-base unit minimum (q=3, m=2)",
            out["passed"], dt, 1.0, str(out["measured"]))


def test_criterion_02_golden_ratio_closure():
    out, dt = _timed(case_golden_closure)
    _report("criterion-02 golden-ratio closure {phi-1,1,phi}",
            out["passed"], dt, 1.0, str(out["measured"]))


def test_criterion_03_sqrt2_pell_descent():
    out, dt = _timed(case_sqrt2_descent)
    detail = (f"depths={out['measured']['depths']} "
              f"max_err={max(out['measured']['value_errors']):.2e}")
    _report("criterion-03 sqrt2 descent through Pell values",
            out["passed"], dt, 10.0, detail)
    assert max(out["measured"]["value_errors"]) <= 1e-9


def test_criterion_04_classification_suite_each_under_1s():
    polys = {
        "x^3-x-1": (IntPolynomial([-1, -1, 0, 1]), "Pisot"),
        "x^4-x^3-1": (IntPolynomial([-1, 0, 0, -1, 1]), "Pisot"),
        "x^2-2": (IntPolynomial([-2, 0, 1]), "NotPisot-AlgebraicInteger"),
        "x^3-2": (IntPolynomial([-2, 0, 0, 1]), "NotPisot-AlgebraicInteger"),
        "x^8-x^6-1": (IntPolynomial([-1, 0, 0, 0, 0, 0, -1, 0, 1]),
                      "NotPisot-AlgebraicInteger"),
    }
    all_ok = True
    worst = 0.0
    details = []
    for name, (poly, want) in polys.items():
        q = AlgebraicNumber.base_from_poly(poly, root_index=0)
        t0 = time.perf_counter()
        got = classify_base(q).tag
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        ok = got == want and dt < 1.0
        all_ok &= ok
        details.append(f"{name}:{got}@{dt:.2f}s")
    # the square of the degree-8 root is Pisot (power chain prerequisite)
    q8 = AlgebraicNumber.base_from_poly(
        IntPolynomial([-1, 0, 0, 0, 0, 0, -1, 0, 1]), root_index=0)
    assert abs(q8.float_value() - 1.1748) < 1e-3
    t0 = time.perf_counter()
    sq = power_base(q8, 2)
    ok_sq = classify_base(sq).tag == "Pisot"
    dt = time.perf_counter() - t0
    worst = max(worst, dt)
    all_ok &= ok_sq and dt < 1.0
    _report("criterion-04 classification suite (each < 1s)",
            all_ok, worst, 1.0, "; ".join(details))


def test_criterion_05_verdict_consistency():
    out, dt = _timed(case_verdict_corpus)
    _report("criterion-05 discreteness verdict corpus + factor-5 descent",
            out["passed"], dt, 60.0,
            str({k: v for k, v in out["measured"].items() if "drop" in k}))


def test_criterion_06_witness_certification():
    out, dt = _timed(case_witness_certificates)
    _report("criterion-06 witness certification (p=-1.2, 2i, i)",
            out["passed"], dt, 5.0, str(out["measured"]))


def test_criterion_07_lazy_contract():
    out, dt = _timed(case_lazy_contract)
    _report("criterion-07 lazy algorithm contract (50 random patterns)",
            out["passed"], dt, 10.0, str(out["measured"]))


def test_criterion_08_quartic_tail_gaps_decrease():
    out, dt = _timed(case_sidorov_solomyak_window)
    _report("criterion-08 quartic-root tail gaps decrease (B=10,30,90)",
            out["passed"], dt, 30.0, str(out["measured"]["tail_gaps"]))
    assert abs(out["measured"]["root"] - 1.2207) < 1e-3


def test_criterion_09_unit_digit_density_trend():
    out, dt = _timed(case_pm_one_density)
    radii = out["measured"]["radii"]
    _report("criterion-09 +-1 window covering radius decreases (deg 7..14)",
            out["passed"], dt, 10.0, f"radii {radii[0]:.4f}->{radii[-1]:.4f}")


def test_criterion_10_oracle_equivalence():
    out, dt = _timed(case_oracle_equivalence)
    _report("criterion-10 brute-force oracle equivalence "
            f"({out['measured']['cases']} checks)",
            out["passed"], dt, 30.0, "")
    assert out["measured"]["cases"] >= 20


def test_reproduction_registry_all_green():
    results = [run_case(c) for c in CASES]
    for r in results:
        mark = "PASS" if r["passed"] and r["within_time"] else "FAIL"
        print(f"{mark} case {r['case']} ({r['runtime_s']}s)")
    assert all(r["passed"] for r in results)
    assert all(r["within_time"] for r in results)
