"""Command-line front end.

Subcommands: classify, spectrum, gaps, minpos, expand, witness, aq,
reproduce.  Every run emits a manifest-carrying envelope (JSON, or CSV for
tabular results); re-running the same manifest reproduces the output byte
for byte apart from the wall time.

Exit codes: 0 ok, 2 precondition violation, 3 budget exhaustion,
4 inconclusive classification / precision exhaustion.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .algebraic import AlgebraicNumber, classify_base
from .config import DEFAULT_PRECISION_BITS, DEFAULT_STATE_BUDGET
from .errors import (
    BudgetExceededError,
    InconclusiveError,
    PreconditionError,
    PrecisionExhaustedError,
    QSpectraError,
    ReducibleInputError,
)
from .expansions import SignPattern, greedy_expansion, lazy_constrained
from .intpoly import IntPolynomial
from .reproduce import case_ids, run_cases
from .serialize import (
    RunManifest,
    canonical_json,
    envelope,
    gaps_csv,
    key_value_csv,
    minpos_csv,
    window_csv,
)
from .spectrum import enumerate_A, enumerate_X, enumerate_Y, gap_report, l_estimate
from .witness import accumulation_verdict, build_witness

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_INCONCLUSIVE = 4


def _add_base_args(sub):
    sub.add_argument("--poly", help="integer coefficients, ascending degree, "
                     "e.g. '-1,-1,0,1' for x^3-x-1")
    sub.add_argument("--root-index", type=int, default=None,
                     help="0-based index into the ascending real roots > 1")
    sub.add_argument("--root-interval", default=None,
                     help="rational isolating interval 'lo..hi'")
    sub.add_argument("--base", default=None,
                     help="decimal base (numeric mode; requires --tolerance)")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot parse number {text!r}: {exc}")


def resolve_base(args) -> AlgebraicNumber:
    if (args.poly is None) == (args.base is None):
        raise PreconditionError("give exactly one of --poly / --base")
    if args.base is not None:
        if args.tolerance is None:
            raise PreconditionError("numeric bases require --tolerance")
        q = AlgebraicNumber.from_rational(_parse_fraction(args.base))
        if not q.greater_than(1):
            raise PreconditionError("base must satisfy q > 1")
        return q
    poly = IntPolynomial.from_text(args.poly)
    if args.root_interval is not None and args.root_index is not None:
        raise PreconditionError("give at most one of --root-index / "
                                "--root-interval")
    if args.root_interval is not None:
        lo_txt, _, hi_txt = args.root_interval.partition("..")
        interval = (_parse_fraction(lo_txt), _parse_fraction(hi_txt))
        return AlgebraicNumber.base_from_poly(poly, root_interval=interval)
    index = args.root_index if args.root_index is not None else 0
    return AlgebraicNumber.base_from_poly(poly, root_index=index)


def _base_params(args) -> dict:
    return {"poly": args.poly, "root_index": args.root_index,
            "root_interval": args.root_interval, "base": args.base,
            "tolerance": args.tolerance}


# ---------------------------------------------------------------------------
# subcommand handlers: return (result, csv_renderer, exit_code)


def cmd_classify(args):
    q = resolve_base(args)
    budget = max(1024, 4 * args.precision)
    cls = classify_base(q, budget_bits=budget)
    result = {
        "base": q.describe(),
        "class": cls.tag,
        "is_pisot": cls.is_pisot,
        "detail": cls.detail,
        "conjugates": cls.evidence(),
    }
    code = EXIT_INCONCLUSIVE if cls.tag == "Inconclusive" else EXIT_OK
    return result, key_value_csv, code


def cmd_spectrum(args):
    q = resolve_base(args)
    B = _parse_fraction(args.bound)
    if args.kind == "X":
        w = enumerate_X(q, args.m, B, tol=args.tolerance,
                        budget=args.budget_states)
    else:
        if args.degree is None:
            raise PreconditionError("Y windows need --degree")
        w = enumerate_Y(q, args.m, args.degree, B, tol=args.tolerance,
                        budget=args.budget_states)
    code = EXIT_BUDGET if w.truncated else EXIT_OK
    return w.to_dict(), window_csv, code


def cmd_gaps(args):
    q = resolve_base(args)
    B = _parse_fraction(args.bound)
    w = enumerate_X(q, args.m, B, tol=args.tolerance,
                    budget=args.budget_states)
    rep = gap_report(w, tail_fraction=args.tail_fraction)
    result = rep.to_dict()
    result["window_truncated"] = w.truncated
    code = EXIT_BUDGET if w.truncated else EXIT_OK
    return result, gaps_csv, code


def cmd_minpos(args):
    q = resolve_base(args)
    est = l_estimate(q, args.m, args.max_depth,
                     state_budget=args.budget_states, tol=args.tolerance)
    result = est.to_dict()
    code = EXIT_BUDGET if est.result.budget_exhausted else EXIT_OK
    return result, minpos_csv, code


def cmd_expand(args):
    q = resolve_base(args)
    if (args.target is None) == (args.pattern is None):
        raise PreconditionError("give exactly one of --target (greedy) / "
                                "--pattern (lazy)")
    if args.target is not None:
        seq = greedy_expansion(_parse_fraction(args.target), q, args.m,
                               args.horizon)
        result = {"mode": "greedy", "base": q.describe(),
                  "target": args.target, "sequence": seq.to_dict()}
    else:
        pattern = SignPattern.from_text(args.pattern)
        seq = lazy_constrained(q, args.m, pattern, args.horizon)
        result = {"mode": "lazy", "base": q.describe(),
                  "pattern": pattern.to_text(), "sequence": seq.to_dict(),
                  "capacity": list(seq.meta.get("capacity", ())),
                  "capacity_certified": seq.meta.get("capacity_certified")}
    return result, key_value_csv, EXIT_OK


def cmd_witness(args):
    q = resolve_base(args)
    rep = build_witness(q, args.m, args.p, horizon=args.horizon)
    return rep.to_dict(), key_value_csv, EXIT_OK


def cmd_aq(args):
    q = resolve_base(args)
    degrees = [int(d) for d in args.degrees.split(",") if d.strip()]
    B = _parse_fraction(args.bound)
    windows = []
    truncated = False
    for n in degrees:
        w = enumerate_A(q, n, B, tol=args.tolerance,
                        budget=args.budget_states)
        truncated |= w.truncated
        windows.append(w)
    radii = [w.covering_radius for w in windows]
    result = {
        "base": q.describe(),
        "bound": float(B),
        "degrees": degrees,
        "covering_radii": radii,
        "strictly_decreasing": all(a > b for a, b in zip(radii, radii[1:])),
        "windows": [w.to_dict() for w in windows],
    }
    code = EXIT_BUDGET if truncated else EXIT_OK
    return result, key_value_csv, code


def cmd_verdict(args):
    q = resolve_base(args)
    v = accumulation_verdict(q, args.m, state_budget=args.budget_states,
                             tol=args.tolerance)
    return v.to_dict(), key_value_csv, EXIT_OK


def cmd_reproduce(args):
    results = run_cases(args.case, threads=args.threads)
    for r in results:
        mark = "PASS" if r["passed"] else "FAIL"
        print(f"{mark} {r['case']:30s} {r['runtime_s']:8.2f}s",
              file=sys.stderr)
    result = {"cases": results,
              "all_passed": all(r["passed"] for r in results)}
    return result, key_value_csv, EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "gaps": cmd_gaps,
    "minpos": cmd_minpos,
    "expand": cmd_expand,
    "witness": cmd_witness,
    "aq": cmd_aq,
    "verdict": cmd_verdict,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                   help="working precision in bits (default from "
                        "SPECTRA_DEFAULT_PRECISION)")
    g.add_argument("--format", choices=["json", "csv"],
                   default=argparse.SUPPRESS)
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker cap for batch runs; output is identical "
                        "for any value")
    g.add_argument("--budget-states", type=int, default=argparse.SUPPRESS)
    g.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                   help="numeric-mode dedup tolerance (required with "
                        "--base)")
    g.add_argument("--out", default=argparse.SUPPRESS,
                   help="write output to this file")

    ap = argparse.ArgumentParser(
        prog="qspectra",
        description="Spectra of real bases q > 1: enumeration, gaps, "
                    "classification, expansions, witnesses.",
        parents=[common])
    ap.set_defaults(precision=DEFAULT_PRECISION_BITS, format="json",
                    threads=1, budget_states=DEFAULT_STATE_BUDGET,
                    tolerance=None, out=None)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", parents=[common],
                        help="Pisot classification of a base")
    _add_base_args(sp)

    sp = sub.add_parser("spectrum", parents=[common],
                        help="enumerate a spectrum window")
    _add_base_args(sp)
    sp.add_argument("--kind", choices=["X", "Y"], default="X")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--bound", required=True)
    sp.add_argument("--degree", type=int, default=None,
                    help="digit-string degree cap (Y windows)")

    sp = sub.add_parser("gaps", parents=[common],
                        help="gap statistics of a window")
    _add_base_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--bound", required=True)
    sp.add_argument("--tail-fraction", type=float, default=0.5)

    sp = sub.add_parser("minpos", parents=[common],
                        help="minimal positive element search")
    _add_base_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-depth", type=int, default=24)

    sp = sub.add_parser("expand", parents=[common],
                        help="greedy or lazy digit expansion")
    _add_base_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--target", default=None,
                    help="greedy expansion target in [0, m/(q-1)]")
    sp.add_argument("--pattern", default=None,
                    help="sign pattern 'explicit:2,4;eventual:in;"
                         "threshold:6' for the lazy expansion")
    sp.add_argument("--horizon", type=int, default=60)

    sp = sub.add_parser("witness", parents=[common],
                        help="conjugate-witness construction")
    _add_base_args(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", required=True, help="companion point 're,im'")
    sp.add_argument("--horizon", type=int, default=120)

    sp = sub.add_parser("aq", parents=[common],
                        help="signed unit-digit windows and covering radii")
    _add_base_args(sp)
    sp.add_argument("--degrees", required=True, help="e.g. '7,14'")
    sp.add_argument("--bound", required=True)

    sp = sub.add_parser("verdict", parents=[common],
                        help="discreteness verdict for (q, m)")
    _add_base_args(sp)
    sp.add_argument("--m", type=int, required=True)

    sp = sub.add_parser("reproduce", parents=[common],
                        help="run registered reproduction cases")
    sp.add_argument("case", nargs="?", default="all",
                    help=f"case id or 'all'; known: {', '.join(case_ids())}")
    return ap


def _params_of(args) -> dict:
    skip = {"command", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


_VALUE_FLAGS = {
    "--poly", "--root-interval", "--base", "--bound", "--target",
    "--pattern", "--p", "--degrees", "--tolerance",
}


def _preprocess_argv(argv):
    """Join value flags with '=' so values with leading dashes parse
    (e.g. --poly -1,-1,0,1)."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            try:
                out.append(f"{tok}={next(it)}")
            except StopIteration:
                out.append(tok)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    ap = build_parser()
    args = ap.parse_args(_preprocess_argv(argv))
    manifest = RunManifest(
        command=args.command,
        params=_params_of(args),
        precision_bits=args.precision,
        budgets={"states": args.budget_states, "threads": args.threads},
    )
    try:
        result, csv_fn, code = COMMANDS[args.command](args)
    except (PreconditionError, ReducibleInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InconclusiveError, PrecisionExhaustedError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except QSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION

    doc = envelope(manifest, result)
    if args.format == "csv":
        text = csv_fn(result)
    else:
        text = canonical_json(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
