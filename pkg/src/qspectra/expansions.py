"""Digit expansions at a base q: greedy expansions over {0..m}, the lazy
constrained expansion with a prescribed sign-pattern set, and periodic
completion of finite zero strings.

All digit decisions are exact: remainders and corridor capacities are
tracked as elements of Q[q] and compared through the base's certified sign
oracle, so boundary ties (remainder exactly zero, capacity exactly one)
are decided correctly instead of dithering at floating precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import AlgebraicNumber, FractionVecArith
from .errors import PreconditionError, QSpectraError


# ---------------------------------------------------------------------------
# sign patterns


@dataclass(frozen=True)
class SignPattern:
    """Set P of positive indices in finite-plus-eventual form.

    ``explicit`` lists the members below ``threshold``; beyond it membership
    is uniform: "in", "out", or "unknown" (materialized-to-horizon patterns
    produced by the witness construction).  Capacities over such a set are
    finitely certifiable.
    """

    explicit: frozenset[int]
    threshold: int
    eventual: str = "out"           # "in" | "out" | "unknown"

    def __post_init__(self):
        if self.eventual not in ("in", "out", "unknown"):
            raise PreconditionError(f"bad eventual flag {self.eventual!r}")
        if self.threshold < 1:
            raise PreconditionError("threshold must be >= 1")
        bad = [i for i in self.explicit if i < 1 or i >= self.threshold]
        if bad:
            raise PreconditionError(
                f"explicit indices {bad} outside [1, threshold)")

    @classmethod
    def all_indices(cls) -> "SignPattern":
        return cls(frozenset(), 1, "in")

    @classmethod
    def no_indices(cls) -> "SignPattern":
        return cls(frozenset(), 1, "out")

    @classmethod
    def eventually_in(cls, explicit, threshold) -> "SignPattern":
        return cls(frozenset(explicit), threshold, "in")

    @classmethod
    def from_membership(cls, members, horizon: int) -> "SignPattern":
        """Materialized pattern: membership known for 1..horizon only."""
        return cls(frozenset(i for i in members if 1 <= i <= horizon),
                   horizon + 1, "unknown")

    def contains(self, i: int) -> bool:
        if i < 1:
            raise PreconditionError("pattern indices start at 1")
        if i < self.threshold:
            return i in self.explicit
        if self.eventual == "unknown":
            raise PreconditionError(
                f"membership of {i} beyond the materialized horizon")
        return self.eventual == "in"

    @classmethod
    def from_text(cls, text: str) -> "SignPattern":
        """Parse "explicit:2,4;eventual:in;threshold:6"."""
        explicit: frozenset[int] = frozenset()
        eventual = "out"
        threshold = None
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            key, _, val = part.partition(":")
            key = key.strip().lower()
            if key == "explicit":
                explicit = frozenset(int(v) for v in val.split(",") if v.strip())
            elif key == "eventual":
                eventual = val.strip().lower()
            elif key == "threshold":
                threshold = int(val)
            else:
                raise PreconditionError(f"unknown pattern field {key!r}")
        if threshold is None:
            threshold = max(explicit, default=0) + 1
        return cls(explicit, threshold, eventual)

    def to_text(self) -> str:
        exp = ",".join(str(i) for i in sorted(self.explicit))
        return f"explicit:{exp};eventual:{self.eventual};threshold:{self.threshold}"


# ---------------------------------------------------------------------------
# digit sequences


@dataclass(frozen=True)
class DigitSequence:
    """Digit stream s_i (coefficient of q^{-i}), i starting at first_index.

    ``period`` repeats forever after the preperiod; ``exact_zero_tail``
    asserts the remaining digits are all zero with zero residual (certified
    exactly).
    """

    preperiod: tuple[int, ...]
    height: int
    period: tuple[int, ...] | None = None
    first_index: int = 0
    exact_zero_tail: bool = False
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def digit(self, i: int) -> int:
        if i < self.first_index:
            raise PreconditionError(f"sequence starts at {self.first_index}")
        j = i - self.first_index
        if j < len(self.preperiod):
            return self.preperiod[j]
        if self.period:
            return self.period[(j - len(self.preperiod)) % len(self.period)]
        return 0

    def digits_through(self, last_index: int) -> list[int]:
        return [self.digit(i) for i in range(self.first_index, last_index + 1)]

    @property
    def is_finitely_supported(self) -> bool:
        return self.period is None and self.exact_zero_tail

    def period_digit_sum(self) -> int | None:
        return sum(self.period) if self.period else None

    def to_dict(self) -> dict:
        return {
            "preperiod": list(self.preperiod),
            "period": list(self.period) if self.period else None,
            "height": self.height,
            "first_index": self.first_index,
            "exact_zero_tail": self.exact_zero_tail,
        }


# ---------------------------------------------------------------------------
# greedy expansion


def greedy_expansion(x, q: AlgebraicNumber, m: int, N: int) -> DigitSequence:
    """Greedy digits c_1..c_N over {0..m} for x = sum c_i q^{-i}.

    At each step the largest digit keeping the remainder nonnegative is
    taken; remainders are exact, so a terminating expansion is detected as
    a certified all-zero tail.  x must be rational (exactly representable).
    """
    if m < 1 or N < 1:
        raise PreconditionError("need m >= 1 and N >= 1")
    if not q.greater_than(1):
        raise PreconditionError("base must satisfy q > 1")
    x = Fraction(x)
    ar = FractionVecArith(q)
    # range check: 0 <= x <= m/(q-1)  <=>  x*(q-1) - m <= 0
    if x < 0:
        raise PreconditionError("x must be >= 0")
    xv = ar.from_fraction(x)
    top = ar.add_fraction(ar.sub(ar.mul_q(xv), xv), -m)
    if ar.sign(top) > 0:
        raise PreconditionError("x exceeds m/(q-1): not representable")
    digits = []
    rem = xv
    zero_from = None
    for k in range(1, N + 1):
        if zero_from is not None:
            digits.append(0)
            continue
        t = ar.mul_q(rem)
        c = 0
        for cand in range(m, -1, -1):
            if ar.sign(ar.add_fraction(t, -cand)) >= 0:
                c = cand
                break
        digits.append(c)
        rem = ar.add_fraction(t, -c)
        if ar.sign(rem) == 0:
            zero_from = k
    return DigitSequence(
        preperiod=tuple(digits), height=m, first_index=1,
        exact_zero_tail=zero_from is not None,
        meta={"zero_from": zero_from})


def _residual_scaled(seq: DigitSequence, ar: FractionVecArith, target,
                     N: int):
    """q^N * (sum_{i<=N} s_i q^{-i} - target) as an exact element."""

    def digit(i: int) -> int:
        return seq.digit(i) if i >= seq.first_index else 0

    acc = ar.add_fraction(ar.from_fraction(-Fraction(target)), digit(0))
    for i in range(1, N + 1):
        acc = ar.step(acc, digit(i))
    return acc


@dataclass(frozen=True)
class ResidualCertificate:
    residual: float
    tail_bound: float
    passed: bool
    exact_zero: bool

    def to_dict(self) -> dict:
        return {"residual": self.residual, "tail_bound": self.tail_bound,
                "passed": self.passed, "exact_zero": self.exact_zero}


def verify_expansion(seq: DigitSequence, q: AlgebraicNumber, target,
                     N: int) -> ResidualCertificate:
    """Certificate that |sum_{i<=N} s_i q^{-i} - target| <= m q^{-N}/(q-1).

    The comparison is exact (scaled through q^N); the reported magnitudes
    are floats for display.
    """
    ar = FractionVecArith(q)
    scaled = _residual_scaled(seq, ar, Fraction(target), N)
    sgn = ar.sign(scaled)
    abs_scaled = scaled if sgn >= 0 else ar.scale(scaled, -1)
    # |scaled| <= m/(q-1)  <=>  |scaled|*(q-1) - m <= 0
    test = ar.add_fraction(ar.sub(ar.mul_q(abs_scaled), abs_scaled),
                           -seq.height)
    passed = ar.sign(test) <= 0
    qf = q.float_value()
    residual = abs(ar.float_value(scaled)) * qf ** (-N)
    tail_bound = seq.height * qf ** (-N) / (qf - 1.0)
    return ResidualCertificate(residual, tail_bound, passed, sgn == 0)


# ---------------------------------------------------------------------------
# lazy constrained expansion


class _Corridor:
    """Exact feasibility tests for the constrained expansion.

    Scaled state u_k = q^k (1 - sum_{i<=k} s_i q^{-i}); the invariant is
    L_k <= u_k q^{-k} <= U_k with U_k (resp. L_k) the largest (most
    negative) value the remaining tail can contribute.  All comparisons are
    multiplied through by q^{T-k}(q-1) > 0, turning them into polynomial
    sign tests.  Patterns with unknown eventual behaviour get the outer
    corridor: optimistic upper tail, pessimistic lower tail, which yields
    exactly the advertised residual bound at the horizon.
    """

    def __init__(self, q: AlgebraicNumber, m: int, pattern: SignPattern,
                 horizon: int):
        if pattern.threshold > max(horizon + 1, 4096):
            raise PreconditionError(
                "pattern threshold too far beyond the horizon for the "
                "scaled corridor")
        self.ar = FractionVecArith(q)
        self.m = m
        self.pattern = pattern
        self.horizon = horizon
        self.T = pattern.threshold
        ar = self.ar
        up_tail = pattern.eventual in ("in", "unknown")
        dn_tail = pattern.eventual in ("out", "unknown")
        one = ar.from_fraction(1)
        qvec = ar.mul_q(one)
        qm1 = ar.sub(qvec, one)
        # W[j] = q^{T-j} (q-1) for 0 <= j <= T-1
        self.w: dict[int, tuple] = {}
        cur = qm1
        for j in range(self.T - 1, -1, -1):
            cur = ar.mul_q(cur)
            self.w[j] = cur
        # RHS sums for k < T
        self.up: dict[int, tuple] = {}
        self.dn: dict[int, tuple] = {}
        up_acc = ar.scale(qvec, m) if up_tail else ar.zero
        dn_acc = ar.scale(qvec, m) if dn_tail else ar.zero
        self.up[self.T - 1] = up_acc
        self.dn[self.T - 1] = dn_acc
        for k in range(self.T - 2, -1, -1):
            i = k + 1
            term = ar.scale(self.w[i], m)
            if i in pattern.explicit:
                up_acc = ar.add(up_acc, term)
            else:
                dn_acc = ar.add(dn_acc, term)
            self.up[k] = up_acc
            self.dn[k] = dn_acc
        self.qm1 = qm1
        self.q_qm1 = ar.mul_q(qm1)
        self.u = one          # u_0 = 1
        self.k = 0

    def capacity_bounds(self) -> tuple[float, float, bool, bool]:
        """(approx_lo, approx_hi, certified_ge_1, certified_lt_1) for the
        Eq-style capacity m sum_{i in P} q^{-i}; the certified flags use the
        pessimistic/optimistic tails of an unknown pattern."""
        ar = self.ar
        w0 = self.w[0]
        up0 = self.up[0]
        if self.pattern.eventual == "unknown":
            qvec = ar.mul_q(ar.from_fraction(1))
            lower_vec = ar.sub(up0, ar.scale(qvec, self.m))
            upper_vec = up0
        else:
            lower_vec = upper_vec = up0
        ge1 = ar.sign(ar.sub(lower_vec, w0)) >= 0
        lt1 = ar.sign(ar.sub(upper_vec, w0)) < 0
        flo = ar.float_value(lower_vec) / ar.float_value(w0)
        fhi = ar.float_value(upper_vec) / ar.float_value(w0)
        return (flo, fhi, ge1, lt1)

    def feasible_digits(self, k: int):
        """Candidate digits at index k in minimal-|s| order."""
        in_p = (k in self.pattern.explicit if k < self.T
                else self.pattern.eventual == "in")
        if k >= self.T and self.pattern.eventual == "unknown":
            raise PreconditionError("horizon exceeds materialized pattern")
        return ([s for s in range(0, self.m + 1)] if in_p
                else [-s for s in range(0, self.m + 1)])

    def choose(self, k: int) -> int:
        """Pick the minimal-|s| digit keeping the corridor invariant."""
        ar = self.ar
        if k <= self.T - 1:
            a = ar.mul(self.u, self.w[k - 1])
            wk = self.w[k]
            up = self.up[k]
            dn = self.dn[k]
        else:
            a = ar.mul(self.u, self.q_qm1)
            wk = self.qm1
            up_tail = self.pattern.eventual == "in"
            up = ar.from_fraction(self.m if up_tail else 0)
            dn = ar.from_fraction(0 if up_tail else self.m)
        for s in self.feasible_digits(k):
            v = ar.sub(a, ar.scale(wk, s))
            if ar.sign(ar.sub(v, up)) <= 0 and ar.sign(ar.add(v, dn)) >= 0:
                self.u = ar.step(self.u, -s)
                self.k = k
                return s
        raise QSpectraError(
            f"no feasible digit at index {k}: corridor invariant violated")

    def residual_is_zero(self) -> bool:
        return self.ar.sign(self.u) == 0

    def residual_float(self) -> float:
        qf = self.ar.q.float_value()
        return self.ar.float_value(self.u) * qf ** (-self.k)


def lazy_constrained(q: AlgebraicNumber, m: int, pattern: SignPattern,
                     horizon: int) -> DigitSequence:
    """Digit sequence with s_0 = -1, digits in {0..m} on pattern indices and
    {0,-1..-m} off them, whose value at q is zero up to the tail bound
    m q^{-N}/(q-1) at the horizon.

    Requires m > q-1 and certified capacity m sum_{i in P} q^{-i} >= 1;
    rejected when the certified capacity upper bound is below one.
    """
    if m < 1 or horizon < 1:
        raise PreconditionError("need m >= 1 and horizon >= 1")
    if not q.greater_than(1):
        raise PreconditionError("base must satisfy q > 1")
    # m > q - 1  <=>  q < m + 1
    if q.compare_to_fraction(m + 1) >= 0:
        raise PreconditionError("need m > q-1 (digit surplus) for the lazy "
                                "algorithm")
    if pattern.eventual == "unknown" and horizon >= pattern.threshold:
        raise PreconditionError("horizon exceeds the materialized pattern")
    corr = _Corridor(q, m, pattern, horizon)
    cap_lo, cap_hi, ge1, lt1 = corr.capacity_bounds()
    if lt1:
        raise PreconditionError(
            f"capacity condition violated: m*sum q^-i = {cap_hi:.6f} < 1")
    # when only the upper bound clears 1 (materialized pattern with unknown
    # tail), the run still meets the horizon residual bound via the outer
    # corridor; certified extendability is recorded in the metadata
    digits = [-1]
    for k in range(1, horizon + 1):
        digits.append(corr.choose(k))
    return DigitSequence(
        preperiod=tuple(digits), height=m, first_index=0,
        exact_zero_tail=corr.residual_is_zero(),
        meta={"capacity": (cap_lo, cap_hi),
              "capacity_certified": ge1,
              "residual_scaled_float": corr.residual_float()})


# ---------------------------------------------------------------------------
# periodic completion


def periodic_completion(digits, q: AlgebraicNumber, m: int) -> DigitSequence:
    """Infinite repetition (s_0...s_n)^infinity of a finite string whose
    value sum s_i q^{-i} is exactly zero; the q-value of the periodic
    sequence is then zero as well.  Reports the digit sum per period."""
    digits = tuple(int(s) for s in digits)
    if not digits:
        raise PreconditionError("empty digit string")
    if any(abs(s) > m for s in digits):
        raise PreconditionError("digit exceeds height bound")
    ar = FractionVecArith(q)
    acc = ar.zero
    for s in digits:
        acc = ar.step(acc, s)
    if ar.sign(acc) != 0:
        raise PreconditionError(
            f"value of the digit string at q is nonzero "
            f"(~{ar.float_value(acc) * q.float_value() ** (-(len(digits) - 1)):.3g})")
    if all(s == 0 for s in digits):
        return DigitSequence(preperiod=(0,), height=m, period=None,
                             first_index=0, exact_zero_tail=True,
                             meta={"digit_sum": 0})
    return DigitSequence(
        preperiod=(), height=m, period=digits, first_index=0,
        meta={"digit_sum": sum(digits)})
