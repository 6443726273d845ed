"""Spectra of a base q > 1: window enumeration, gap statistics, and the
branch-and-bound engine for the smallest positive element.

Two value kernels back every engine:

* exact mode (monic minimal polynomial, including integer bases): values are
  canonical integer vectors in Z[q]; deduplication and ordering are exact.
* numeric mode (everything else): values are floats deduplicated within a
  declared tolerance.

Results are deterministic: levels are expanded in sorted order and every
window is canonically sorted before emission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebraic import AlgebraicNumber, ZqContext
from .config import DEFAULT_NUMERIC_TOL, DEFAULT_STATE_BUDGET
from .errors import PreconditionError


@dataclass(frozen=True)
class DigitString:
    """Finite coefficient string s_0..s_n (ascending powers) of height m."""

    digits: tuple[int, ...]
    height: int

    def __post_init__(self):
        if any(abs(s) > self.height for s in self.digits):
            raise PreconditionError("digit exceeds height bound")

    @property
    def degree(self) -> int:
        return len(self.digits) - 1

    def validate_for_kind(self, kind: str) -> "DigitString":
        """Window-specific digit alphabets: X needs 0..m, A needs +-1."""
        if kind == "X" and any(s < 0 for s in self.digits):
            raise PreconditionError("X digits must be nonnegative")
        if kind == "A" and any(s not in (-1, 1) for s in self.digits):
            raise PreconditionError("A digits must be +-1")
        return self


def _canonical_digits(top_first: tuple[int, ...]) -> tuple[int, ...]:
    """Convert a top-first construction path to ascending digits with the
    top zeros trimmed; the zero value keeps a single 0 digit."""
    digits = tuple(reversed(top_first))
    while len(digits) > 1 and digits[-1] == 0:
        digits = digits[:-1]
    return digits if digits else (0,)


# ---------------------------------------------------------------------------
# value kernels


class _ExactKernel:
    """Values are canonical integer vectors in Z[q] (monic min_poly)."""

    is_exact = True

    def __init__(self, q: AlgebraicNumber):
        self.q = q
        self.ctx: ZqContext = q.zq_context()
        self.ctx.ensure_float_resolution()

    @property
    def zero(self):
        return self.ctx.zero

    def step(self, v, s: int):
        return self.ctx.step(v, s)

    def sign(self, v) -> int:
        return self.ctx.sign(v)

    def neg(self, v):
        return self.ctx.neg(v)

    def cmp_fraction(self, v, c: Fraction) -> int:
        scaled = [c.denominator * x for x in v]
        scaled[0] -= c.numerator
        return self.ctx.sign(tuple(scaled))

    def float_value(self, v) -> float:
        return self.ctx.float_value(v)

    def compare(self, a, b) -> int:
        return self.ctx.compare(a, b)

    def sub(self, a, b):
        return self.ctx.sub(a, b)

    def vec_of(self, v):
        return v


class _FloatKernel:
    """Values are floats; equality within an absolute tolerance."""

    is_exact = False

    def __init__(self, q: AlgebraicNumber, tol_abs: float):
        self.q = q
        self.qf = q.float_value()
        self.tol = tol_abs

    @property
    def zero(self):
        return 0.0

    def step(self, v, s: int):
        return self.qf * v + s

    def sign(self, v) -> int:
        if v > self.tol:
            return 1
        if v < -self.tol:
            return -1
        return 0

    def neg(self, v):
        return -v

    def cmp_fraction(self, v, c: Fraction) -> int:
        return self.sign(v - float(c))

    def float_value(self, v) -> float:
        return v

    def compare(self, a, b) -> int:
        return self.sign(a - b)

    def sub(self, a, b):
        return a - b

    def vec_of(self, v):
        return None


class _ExactSeen:
    """Insertion-ordered exact value set with witnesses."""

    def __init__(self):
        self._data: dict = {}

    def add(self, v, witness) -> bool:
        if v in self._data:
            return False
        self._data[v] = witness
        return True

    def __len__(self):
        return len(self._data)

    def items(self):
        return self._data.items()


class _FloatSeen:
    """Tolerance-bucketed float set; the first representative wins."""

    def __init__(self, tol_abs: float):
        self.tol = tol_abs
        self._buckets: dict[int, list[float]] = {}
        self._data: dict[float, tuple] = {}

    def _near(self, v: float):
        k = round(v / self.tol)
        for kk in (k - 1, k, k + 1):
            for u in self._buckets.get(kk, ()):
                if abs(u - v) <= self.tol:
                    return u
        return None

    def add(self, v, witness) -> bool:
        if self._near(v) is not None:
            return False
        self._buckets.setdefault(round(v / self.tol), []).append(v)
        self._data[v] = witness
        return True

    def __len__(self):
        return len(self._data)

    def items(self):
        return self._data.items()


def make_kernel(q: AlgebraicNumber, tol: float | None = None,
                scale: float = 1.0):
    """Exact kernel when the minimal polynomial is monic, else numeric with
    absolute tolerance tol * (1 + scale)."""
    if q.min_poly.is_monic:
        return _ExactKernel(q)
    tol = DEFAULT_NUMERIC_TOL if tol is None else tol
    return _FloatKernel(q, tol * (1.0 + scale))


def _new_seen(kernel):
    return _ExactSeen() if kernel.is_exact else _FloatSeen(kernel.tol)


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class SpectrumPoint:
    value: float
    vec: tuple[int, ...] | None
    digits: tuple[int, ...]

    def to_dict(self) -> dict:
        d: dict = {"approx": self.value, "digits": list(self.digits)}
        if self.vec is not None:
            d["vec"] = list(self.vec)
        return d


@dataclass(frozen=True)
class SpectrumWindow:
    base: AlgebraicNumber
    m: int
    kind: str                       # "X" | "Y" | "A"
    degree: int | None              # digit-string degree cap (None for X)
    bound: Fraction
    complete: bool
    points: tuple[SpectrumPoint, ...]
    covering_radius: float | None = None
    truncated: bool = False

    def values(self) -> list[float]:
        return [p.value for p in self.points]

    def to_dict(self) -> dict:
        d = {
            "base": self.base.describe(),
            "m": self.m,
            "kind": self.kind,
            "degree": self.degree,
            "bound": float(self.bound),
            "complete": self.complete,
            "truncated": self.truncated,
            "points": [p.to_dict() for p in self.points],
        }
        if self.covering_radius is not None:
            d["covering_radius"] = self.covering_radius
        return d


def _sorted_points(kernel, seen) -> list[SpectrumPoint]:
    pts = [(kernel.float_value(v), v, w) for v, w in seen.items()]
    pts.sort(key=lambda t: t[0])
    if kernel.is_exact:
        # floats order almost everything; certify adjacent pairs exactly and
        # bubble any near-tie into its true position
        i = 0
        while i < len(pts) - 1:
            if kernel.compare(pts[i][1], pts[i + 1][1]) > 0:
                pts[i], pts[i + 1] = pts[i + 1], pts[i]
                i = max(i - 1, 0)
            else:
                i += 1
    return [SpectrumPoint(fv, kernel.vec_of(v), _canonical_digits(w))
            for fv, v, w in pts]


def _check_base(q: AlgebraicNumber):
    if not q.greater_than(1):
        raise PreconditionError("base must satisfy q > 1")


def enumerate_X(q: AlgebraicNumber, m: int, B, *, tol: float | None = None,
                budget: int = DEFAULT_STATE_BUDGET) -> SpectrumWindow:
    """Complete window X^m(q) in [0, B]: every value of a digit string over
    {0..m} up to B, exactly once.

    Nonnegative digits make top-truncated prefixes of any admissible string
    admissible themselves, so level sets {q*x + s} pruned above B are
    exhaustive; and a value with top digit at degree n is at least q^n, so
    the recursion stops after ~log_q B levels.
    """
    _check_base(q)
    if m < 1:
        raise PreconditionError("m >= 1 required")
    B = Fraction(B)
    if B <= 0:
        raise PreconditionError("B > 0 required")
    kernel = make_kernel(q, tol, float(B))
    seen = _new_seen(kernel)
    seen.add(kernel.zero, ())
    level = [(kernel.zero, ())]
    complete = True
    while level:
        nxt = []
        for v, path in level:
            for s in range(m + 1):
                child = kernel.step(v, s)
                if kernel.cmp_fraction(child, B) > 0:
                    continue
                if seen.add(child, path + (s,)):
                    nxt.append((child, path + (s,)))
            if len(seen) > budget:
                complete = False
                nxt = []
                break
        level = nxt
    return SpectrumWindow(q, m, "X", None, B, complete,
                          tuple(_sorted_points(kernel, seen)),
                          truncated=not complete)


def _tail_max(qf: float, m: int, r: int) -> float:
    """max |sum_{i<r} s_i q^i| over |s_i| <= m, float upper estimate."""
    if r <= 0:
        return 0.0
    return m * (qf**r - 1.0) / (qf - 1.0)


def enumerate_Y(q: AlgebraicNumber, m: int, degree: int, B, *,
                tol: float | None = None,
                budget: int = DEFAULT_STATE_BUDGET) -> SpectrumWindow:
    """Degree-truncated window of the spectrum Y^m(q): all values
    sum_{i<=degree} s_i q^i with |s_i| <= m lying in [-B, B].

    The window is certified complete for Y^m(q) cap [-B, B] only when the
    growth bound applies: q > m+1 and q^(degree+1) (1 - m/(q-1)) >= B.
    """
    _check_base(q)
    if m < 1 or degree < 0:
        raise PreconditionError("need m >= 1 and degree >= 0")
    B = Fraction(B)
    if B <= 0:
        raise PreconditionError("B > 0 required")
    kernel = make_kernel(q, tol, float(B))
    qf = q.float_value()
    n_digits = degree + 1
    level = [(kernel.zero, ())]
    complete_enum = True
    for t in range(n_digits):
        r = n_digits - 1 - t
        cap = float(B) * 1.0000001 + _tail_max(qf, m, r) + 1e-9
        nxt_seen = _new_seen(kernel)
        nxt = []
        for v, path in level:
            for s in range(-m, m + 1):
                child = kernel.step(v, s)
                fv = kernel.float_value(child)
                if abs(fv) > cap:
                    continue
                if nxt_seen.add(child, path + (s,)):
                    nxt.append((child, path + (s,)))
            if len(nxt_seen) > budget:
                complete_enum = False
                break
        level = nxt
        if not complete_enum:
            break
    final = _new_seen(kernel)
    for v, path in level:
        if kernel.cmp_fraction(v, B) <= 0 and kernel.cmp_fraction(
                kernel.neg(v), B) <= 0:
            final.add(v, path)
    certified = complete_enum and _devries_complete(q, m, degree, B)
    return SpectrumWindow(q, m, "Y", degree, B, certified,
                          tuple(_sorted_points(kernel, final)),
                          truncated=not complete_enum)


def _devries_complete(q: AlgebraicNumber, m: int, degree: int, B: Fraction
                      ) -> bool:
    """True when every spectrum value with a digit beyond the degree cap
    provably exceeds B: |y| > q^n (1 - m/(q-1)) for top degree n."""
    lo, _ = q.refine_to_width(Fraction(1, 2**24))
    if lo <= m + 1:
        return False
    margin = 1 - Fraction(m) / (lo - 1)
    return lo ** (degree + 1) * margin >= B


def enumerate_A(q: AlgebraicNumber, degree: int, B, *,
                tol: float | None = None,
                budget: int = DEFAULT_STATE_BUDGET) -> SpectrumWindow:
    """Window of A(q) = {sum a_i q^i, a_i in {-1, 1}} for strings of degree
    exactly ``degree``, clipped to [-B, B], with its covering radius."""
    _check_base(q)
    if q.compare_to_fraction(2) > 0:
        raise PreconditionError("A(q) windows require 1 < q <= 2")
    if degree < 0:
        raise PreconditionError("degree >= 0 required")
    B = Fraction(B)
    kernel = make_kernel(q, tol, float(B))
    qf = q.float_value()
    n_digits = degree + 1
    level = [(kernel.zero, ())]
    complete = True
    for t in range(n_digits):
        r = n_digits - 1 - t
        cap = float(B) * 1.0000001 + _tail_max(qf, 1, r) + 1e-9
        nxt_seen = _new_seen(kernel)
        nxt = []
        for v, path in level:
            for s in (-1, 1):
                child = kernel.step(v, s)
                if abs(kernel.float_value(child)) > cap:
                    continue
                if nxt_seen.add(child, path + (s,)):
                    nxt.append((child, path + (s,)))
            if len(nxt_seen) > budget:
                complete = False
                break
        level = nxt
        if not complete:
            break
    final = _new_seen(kernel)
    for v, path in level:
        if kernel.cmp_fraction(v, B) <= 0 and kernel.cmp_fraction(
                kernel.neg(v), B) <= 0:
            final.add(v, path)
    points = _sorted_points(kernel, final)
    radius = _covering_radius([p.value for p in points], float(B))
    return SpectrumWindow(q, 1, "A", degree, B, complete, tuple(points),
                          covering_radius=radius, truncated=not complete)


def _covering_radius(values: list[float], B: float) -> float | None:
    """max over t in [-B, B] of the distance from t to the value set."""
    if not values:
        return None
    r = max(values[0] + B, B - values[-1], 0.0)
    for a, b in zip(values, values[1:]):
        r = max(r, (b - a) / 2)
    return r


# point digits are stored top-first during construction; windows re-expose
# them ascending via _canonical_digits


# ---------------------------------------------------------------------------
# gaps


@dataclass(frozen=True)
class GapReport:
    window_kind: str
    bound: float
    point_count: int
    min_gap: float
    max_gap_tail: float
    tail_fraction: float
    histogram: tuple[tuple[float, int], ...]
    min_gap_vec: tuple[int, ...] | None = None

    def count_equal(self, value: float, tol: float = 1e-9) -> int:
        return sum(n for g, n in self.histogram if abs(g - value) <= tol)

    def to_dict(self) -> dict:
        return {
            "kind": self.window_kind,
            "bound": self.bound,
            "points": self.point_count,
            "min_gap": self.min_gap,
            "max_gap_tail": self.max_gap_tail,
            "tail_fraction": self.tail_fraction,
            "histogram": [[g, n] for g, n in self.histogram],
        }


def gap_report(window: SpectrumWindow, tail_fraction: float = 0.5,
               hist_tol: float = 1e-9) -> GapReport:
    """Consecutive-gap statistics of a window.

    In exact mode gaps are grouped by canonical vector, so the histogram and
    the minimum are exact; numerically gaps are clustered within hist_tol.
    """
    pts = window.points
    if len(pts) < 2:
        raise PreconditionError("need at least 2 points for gaps")
    exact = pts[0].vec is not None
    groups: dict = {}
    order = []
    tail_from = tail_fraction * float(window.bound)
    max_tail = None
    for a, b in zip(pts, pts[1:]):
        if exact:
            key = tuple(y - x for x, y in zip(a.vec, b.vec))
        else:
            key = round((b.value - a.value) / hist_tol)
        if key not in groups:
            groups[key] = [b.value - a.value, 0]
            order.append(key)
        groups[key][1] += 1
        if a.value >= tail_from:
            gap = b.value - a.value
            if max_tail is None or gap > max_tail:
                max_tail = gap
    hist = sorted((groups[k][0], groups[k][1]) for k in order)
    min_gap = hist[0][0]
    min_vec = None
    if exact:
        # certify the minimal group exactly among float near-ties
        best = order[0]
        ctx = window.base.zq_context()
        for k in order:
            if ctx.sign(tuple(x - y for x, y in zip(k, best))) < 0:
                best = k
        min_gap = groups[best][0]
        min_vec = best
    if max_tail is None:
        max_tail = hist[-1][0]
    return GapReport(window.kind, float(window.bound), len(pts), min_gap,
                     max_tail, tail_fraction, tuple(hist), min_vec)


# ---------------------------------------------------------------------------
# minimal positive element engine


@dataclass(frozen=True)
class BfsDepthRecord:
    depth: int
    min_value: float
    min_vec: tuple[int, ...] | None
    witness: tuple[int, ...]
    states: int
    new_states: int

    def to_dict(self) -> dict:
        finite = math.isfinite(self.min_value)
        return {"depth": self.depth,
                "min_value": self.min_value if finite else None,
                "min_vec": list(self.min_vec) if self.min_vec else None,
                "witness": list(self.witness), "states": self.states,
                "new_states": self.new_states}


@dataclass(frozen=True)
class BfsResult:
    base: AlgebraicNumber
    m: int
    trace: tuple[BfsDepthRecord, ...]
    closed: bool
    budget_exhausted: bool
    closed_states: tuple[tuple[float, tuple[int, ...] | None], ...] | None
    min_positive: float | None
    min_positive_vec: tuple[int, ...] | None
    min_witness: tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "base": self.base.describe(),
            "m": self.m,
            "trace": [r.to_dict() for r in self.trace],
            "closed": self.closed,
            "budget_exhausted": self.budget_exhausted,
            "closed_states": ([[v, list(vec) if vec else None]
                               for v, vec in self.closed_states]
                              if self.closed_states is not None else None),
            "min_positive": self.min_positive,
            "min_positive_vec": (list(self.min_positive_vec)
                                 if self.min_positive_vec else None),
            "min_witness": (list(self.min_witness)
                            if self.min_witness else None),
        }


def min_positive_bfs(q: AlgebraicNumber, m: int, max_depth: int = 24, *,
                     state_budget: int = DEFAULT_STATE_BUDGET,
                     tol: float | None = None) -> BfsResult:
    """Smallest positive spectrum value reachable within (0, m/(q-1)].

    States are the values of height-m digit strings lying in (0, c],
    c = m/(q-1), tracked up to sign; the expansion y -> q*y + s cannot leave
    [-c, c] for any string whose value ends there, so the search is
    exhaustive on that interval.  If a full expansion round adds no new
    state the reachable set is closed and min over it equals the true
    infimum of positive spectrum values in (0, c].
    """
    _check_base(q)
    if m < 1:
        raise PreconditionError("m >= 1 required")
    kernel = make_kernel(q, tol, 1.0)

    def in_upper(v) -> bool:
        # v <= c  <=>  v*(q-1) - m <= 0; exact mode scales through min_poly
        if kernel.is_exact:
            ctx = kernel.ctx
            w = ctx.sub(ctx.mul_q(v), v)
            return ctx.sign(ctx.add_int(w, -m)) <= 0
        c = m / (kernel.qf - 1.0)
        return v <= c + kernel.tol

    seen = _new_seen(kernel)
    level = []
    best = None  # (value_repr, witness)
    trace = []
    for s in range(1, m + 1):
        v = kernel.step(kernel.zero, s)
        if kernel.sign(v) > 0 and in_upper(v):
            if seen.add(v, (s,)):
                level.append((v, (s,)))
                if best is None or kernel.compare(v, best[0]) < 0:
                    best = (v, (s,))
    depth = 1
    closed = False
    budget_exhausted = False
    trace.append(_depth_record(kernel, depth, best, seen, level))
    while depth < max_depth:
        nxt = []
        for v, path in level:
            for s in range(-m, m + 1):
                child = kernel.step(v, s)
                sign = kernel.sign(child)
                if sign == 0:
                    continue
                if sign < 0:
                    child = kernel.neg(child)
                    cpath = tuple(-x for x in path) + (-s,)
                else:
                    cpath = path + (s,)
                if not in_upper(child):
                    continue
                if seen.add(child, cpath):
                    nxt.append((child, cpath))
                    if best is None or kernel.compare(child, best[0]) < 0:
                        best = (child, cpath)
            if len(seen) > state_budget:
                budget_exhausted = True
                break
        if budget_exhausted:
            break
        depth += 1
        trace.append(_depth_record(kernel, depth, best, seen, nxt))
        if not nxt:
            closed = True
            break
        level = nxt

    closed_states = None
    if closed:
        closed_states = tuple(
            (kernel.float_value(v), kernel.vec_of(v))
            for v, _ in sorted(((v, w) for v, w in seen.items()),
                               key=lambda t: kernel.float_value(t[0])))
    return BfsResult(
        base=q, m=m, trace=tuple(trace), closed=closed,
        budget_exhausted=budget_exhausted, closed_states=closed_states,
        min_positive=kernel.float_value(best[0]) if best else None,
        min_positive_vec=kernel.vec_of(best[0]) if best else None,
        min_witness=_canonical_digits(best[1]) if best else None,
    )


def _depth_record(kernel, depth, best, seen, new_level):
    if best is None:
        return BfsDepthRecord(depth, math.inf, None, (), len(seen),
                              len(new_level))
    return BfsDepthRecord(depth, kernel.float_value(best[0]),
                          kernel.vec_of(best[0]),
                          _canonical_digits(best[1]), len(seen),
                          len(new_level))


# ---------------------------------------------------------------------------
# liminf / limsup estimators


@dataclass(frozen=True)
class MinPositiveEstimate:
    result: BfsResult
    verdict: str        # "positive-certified" | "decreasing" | "stalled"

    def to_dict(self) -> dict:
        d = self.result.to_dict()
        d["verdict"] = self.verdict
        return d


def l_estimate(q: AlgebraicNumber, m: int, max_depth: int = 24, *,
               state_budget: int = DEFAULT_STATE_BUDGET,
               tol: float | None = None) -> MinPositiveEstimate:
    """Per-depth trace of the smallest positive element with a verdict:
    closure certifies a positive liminf proxy; otherwise the trace is
    classified by whether it kept decreasing through the later depths."""
    res = min_positive_bfs(q, m, max_depth, state_budget=state_budget,
                           tol=tol)
    if res.closed:
        return MinPositiveEstimate(res, "positive-certified")
    mins = [r.min_value for r in res.trace]
    last_drop = 0
    for i in range(1, len(mins)):
        if mins[i] < mins[i - 1]:
            last_drop = i
    verdict = "decreasing" if last_drop >= len(mins) / 2 else "stalled"
    return MinPositiveEstimate(res, verdict)


@dataclass(frozen=True)
class TailGapTable:
    base: AlgebraicNumber
    m: int
    rows: tuple[tuple[float, float], ...]   # (bound, max_gap_tail)
    verdict: str                            # "decreasing" | "constant" | "mixed"

    def to_dict(self) -> dict:
        return {"base": self.base.describe(), "m": self.m,
                "rows": [[b, g] for b, g in self.rows],
                "verdict": self.verdict}


def L_estimate(q: AlgebraicNumber, m: int, bounds, *,
               tail_fraction: float = 0.5, tol: float | None = None,
               budget: int = DEFAULT_STATE_BUDGET) -> TailGapTable:
    """Largest consecutive gap over the top of X^m windows for an increasing
    schedule of bounds; the limsup shadow."""
    bounds = [Fraction(b) for b in bounds]
    if sorted(bounds) != bounds or len(bounds) < 1:
        raise PreconditionError("bounds schedule must be increasing")
    rows = []
    for B in bounds:
        w = enumerate_X(q, m, B, tol=tol, budget=budget)
        rep = gap_report(w, tail_fraction=tail_fraction)
        rows.append((float(B), rep.max_gap_tail))
    gaps = [g for _, g in rows]
    if all(a > b for a, b in zip(gaps, gaps[1:])):
        verdict = "decreasing"
    elif all(abs(a - b) <= 1e-12 * (1 + abs(a)) for a, b in zip(gaps, gaps[1:])):
        verdict = "constant"
    else:
        verdict = "mixed"
    return TailGapTable(q, m, tuple(rows), verdict)
