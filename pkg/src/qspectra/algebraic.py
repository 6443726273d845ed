"""Certified arithmetic for real algebraic bases q > 1.

Three layers live here:

* ``AlgebraicNumber`` -- a real root of an integer polynomial pinned by a
  rational isolating interval, with monotone on-demand refinement and an
  exact sign oracle for integer-polynomial expressions in the root.
* ``conjugates`` / ``classify_base`` -- all complex roots with certified
  error disks (simultaneous Weierstrass iteration, a-posteriori disks
  checked in exact rational arithmetic), unit-circle membership decided
  exactly through the reciprocal-factor gcd, and the Pisot predicate on top.
* ``ZqContext`` / ``ZqElement`` -- the canonical integer-vector kernel for
  Z[q] when the minimal polynomial is monic; exact equality and ordering.

Minimal polynomials are trusted to be irreducible (input contract).  A cheap
screen rejects obvious violations; deeper violations surface as
``ReducibleInputError`` when a sign refinement fails to terminate.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mpc, mpf, workprec

from .config import MAX_CERTIFY_BITS
from .errors import PreconditionError, ReducibleInputError
from .intpoly import (
    IntPolynomial,
    cauchy_root_bound,
    count_roots_in,
    deflate_root,
    irreducibility_screen,
    is_squarefree,
    isolate_roots_exact,
    poly_divmod_exact,
    poly_gcd,
    rational_roots,
    refine_root_interval,
    squarefree_part,
    sturm_chain,
)

# ---------------------------------------------------------------------------
# small exact helpers


def mpf_to_fraction(x) -> Fraction:
    """Exact value of an mpmath float (binary floats are rationals).

    Reads the mantissa/exponent pair directly: converting through mpf()
    would re-round to the ambient working precision.
    """
    if isinstance(x, (int, float)):
        return Fraction(x)
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def _ipow(lo: Fraction, hi: Fraction, n: int) -> tuple[Fraction, Fraction]:
    """Interval power [lo, hi]^n."""
    if n == 0:
        return (Fraction(1), Fraction(1))
    plo, phi = lo**n, hi**n
    if lo >= 0:
        return (plo, phi)
    if hi <= 0:
        return (plo, phi) if n % 2 else (phi, plo)
    if n % 2:
        return (plo, phi)
    return (Fraction(0), max(plo, phi))


# Gaussian rationals as (re, im) Fraction pairs.


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gdiv(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _gpolyval(coeffs, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _gmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


# ---------------------------------------------------------------------------
# AlgebraicNumber


class AlgebraicNumber:
    """A real root of an integer polynomial, known exactly.

    The isolating interval is refinable; refinement is monotone (the stored
    interval only ever shrinks) and idempotent, so concurrent refiners can
    race harmlessly.  All exact decisions route through
    :meth:`sign_of_int_poly`.
    """

    def __init__(self, min_poly: IntPolynomial, lo: Fraction, hi: Fraction,
                 _validated: bool = False):
        if min_poly.degree < 1:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        if not is_squarefree(min_poly):
            raise PreconditionError("minimal polynomial must be squarefree")
        self.min_poly = min_poly.primitive()
        self.exact_rational: Fraction | None = None
        if self.min_poly.degree == 1:
            c0, c1 = self.min_poly.coeffs
            self.exact_rational = Fraction(-c0, c1)
            lo = hi = self.exact_rational
        elif not _validated:
            lo, hi = Fraction(lo), Fraction(hi)
            if self.min_poly.sign_at(lo) == 0 or self.min_poly.sign_at(hi) == 0:
                lo, hi = self._nudge_endpoints(lo, hi)
            if count_roots_in(self.min_poly, lo, hi) != 1:
                raise PreconditionError(
                    f"interval ({lo}, {hi}) does not isolate exactly one root")
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        self._lock = threading.Lock()
        self._pow_cache: list[tuple[Fraction, Fraction]] = []
        self._pow_cache_interval: tuple[Fraction, Fraction] | None = None
        screen = irreducibility_screen(self.min_poly)
        self.irreducibility = screen

    def _nudge_endpoints(self, lo, hi):
        # an endpoint hit a rational root; shrink symmetric around it or fail
        for r in rational_roots(self.min_poly):
            if r == lo or r == hi:
                raise PreconditionError(
                    "interval endpoint is a root; use from_rational for "
                    "rational values")
        return lo, hi

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "AlgebraicNumber":
        v = Fraction(value)
        return cls(IntPolynomial([-v.numerator, v.denominator]), v, v)

    @classmethod
    def real_roots(cls, p: IntPolynomial,
                   radius: Fraction | None = None) -> list["AlgebraicNumber"]:
        """All real roots of p, ascending, refined to the target radius."""
        if p.is_zero:
            raise PreconditionError("zero polynomial rejected")
        sf = squarefree_part(p)
        roots = []
        for lo, hi in isolate_roots_exact(sf):
            mid = (lo + hi) / 2
            if sf.degree >= 1 and sf.sign_at(mid) == 0 and lo < mid < hi:
                roots.append(cls.from_rational(mid))
                continue
            rat = [r for r in rational_roots(sf) if lo < r < hi]
            if rat:
                roots.append(cls.from_rational(rat[0]))
            else:
                roots.append(cls(sf, lo, hi, _validated=True))
        if radius is not None:
            for r in roots:
                r.refine_to_radius(radius)
        return roots

    @classmethod
    def base_from_poly(cls, p: IntPolynomial, root_index: int | None = None,
                       root_interval: tuple[Fraction, Fraction] | None = None
                       ) -> "AlgebraicNumber":
        """Select a base q > 1: either by interval, or by 0-based index into
        the ascending list of real roots greater than one."""
        if (root_index is None) == (root_interval is None):
            raise PreconditionError("give exactly one of root index / interval")
        if root_interval is not None:
            lo, hi = root_interval
            q = cls(p, lo, hi)
            if not q.greater_than(1):
                raise PreconditionError("selected root is not > 1")
            return q
        candidates = [r for r in cls.real_roots(p) if r.greater_than(1)]
        if not 0 <= root_index < len(candidates):
            raise PreconditionError(
                f"root index {root_index} out of range: {len(candidates)} "
                f"real roots > 1")
        return candidates[root_index]

    # -- refinement --------------------------------------------------------

    def interval(self) -> tuple[Fraction, Fraction]:
        return (self._lo, self._hi)

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def is_algebraic_integer(self) -> bool:
        return self.min_poly.is_monic

    def refine_to_width(self, width: Fraction) -> tuple[Fraction, Fraction]:
        lo, hi = self._lo, self._hi
        if hi - lo <= width or self.exact_rational is not None:
            return (lo, hi)
        nlo, nhi = refine_root_interval(self.min_poly, lo, hi, width)
        with self._lock:
            # keep the narrower of racing refinements
            if nhi - nlo < self._hi - self._lo:
                self._lo, self._hi = nlo, nhi
        return (self._lo, self._hi)

    def refine_to_radius(self, radius) -> tuple[Fraction, Fraction]:
        return self.refine_to_width(2 * Fraction(radius))

    def approx(self, radius) -> tuple[Fraction, Fraction]:
        """(midpoint, half-width) with half-width <= radius."""
        lo, hi = self.refine_to_radius(radius)
        return ((lo + hi) / 2, (hi - lo) / 2)

    def float_value(self) -> float:
        lo, hi = self.refine_to_width(Fraction(1, 2**72))
        return float((lo + hi) / 2)

    def mpf_value(self, prec_bits: int):
        lo, hi = self.refine_to_width(Fraction(1, 2 ** (prec_bits + 8)))
        with workprec(prec_bits + 16):
            return (mpf(lo.numerator) / lo.denominator
                    + mpf(hi.numerator) / hi.denominator) / 2

    # -- exact decisions ----------------------------------------------------

    def sign_of_int_poly(self, g: IntPolynomial) -> int:
        """Exact sign of g(q).  Zero is detected through divisibility by the
        minimal polynomial, so the loop terminates for irreducible input."""
        if g.is_zero:
            return 0
        if self.exact_rational is not None:
            return g.sign_at(self.exact_rational)
        _, rem = poly_divmod_exact(g, self.min_poly)
        return self._sign_of_reduced(rem)

    def sign_of_fraction_vec(self, vec) -> int:
        """Exact sign of sum vec[i] * q^i for Fraction/int coefficients."""
        if self.exact_rational is not None:
            x = self.exact_rational
            acc = Fraction(0)
            for c in reversed(vec):
                acc = acc * x + Fraction(c)
            return (acc > 0) - (acc < 0)
        scale = math.lcm(*(Fraction(c).denominator for c in vec)) if vec else 1
        ints = [int(Fraction(c) * scale) for c in vec]
        return self.sign_of_int_poly(IntPolynomial(ints))

    def _sign_of_reduced(self, rem: list[Fraction]) -> int:
        if not any(rem):
            return 0
        budget = MAX_CERTIFY_BITS
        while True:
            lo, hi = self._lo, self._hi
            vlo, vhi = self._eval_fraction_interval(rem, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            if hi - lo <= Fraction(1, 2**budget):
                raise ReducibleInputError(
                    "sign refinement stalled; input may be reducible")
            self.refine_to_width((hi - lo) / 4)

    def _powers(self, upto: int) -> list[tuple[Fraction, Fraction]]:
        with self._lock:
            key = (self._lo, self._hi)
            if self._pow_cache_interval != key:
                self._pow_cache = [(Fraction(1), Fraction(1)), key]
                self._pow_cache_interval = key
            pows = self._pow_cache
            while len(pows) <= upto:
                lo, hi = pows[-1]
                pows.append(_ipow_mul(lo, hi, key[0], key[1]))
            return list(pows)

    def _eval_fraction_interval(self, coeffs, lo, hi):
        pows = self._powers(len(coeffs) - 1)
        vlo = Fraction(0)
        vhi = Fraction(0)
        for c, (plo, phi) in zip(coeffs, pows):
            c = Fraction(c)
            if c >= 0:
                vlo += c * plo
                vhi += c * phi
            else:
                vlo += c * phi
                vhi += c * plo
        return vlo, vhi

    def value_interval_of_vec(self, vec) -> tuple[Fraction, Fraction]:
        lo, hi = self._lo, self._hi
        return self._eval_fraction_interval(list(vec), lo, hi)

    def compare_to_fraction(self, c) -> int:
        c = Fraction(c)
        return self.sign_of_int_poly(
            IntPolynomial([-c.numerator, c.denominator]))

    def greater_than(self, c) -> bool:
        return self.compare_to_fraction(c) > 0

    def greater_equal(self, c) -> bool:
        return self.compare_to_fraction(c) >= 0

    def power(self, k: int) -> "AlgebraicNumber":
        return power_base(self, k)

    def zq_context(self) -> "ZqContext":
        if not self.min_poly.is_monic:
            raise PreconditionError(
                "exact Z[q] mode requires a monic minimal polynomial")
        if getattr(self, "_zq_ctx", None) is None:
            self._zq_ctx = ZqContext(self)
        return self._zq_ctx

    def describe(self) -> dict:
        return {"poly": self.min_poly.to_text(),
                "root": self.float_value()}

    def __repr__(self):
        return f"AlgebraicNumber({self.min_poly.to_text()}, ~{self.float_value():.6f})"


def _ipow_mul(alo, ahi, blo, bhi):
    """Interval product [alo,ahi] * [blo,bhi]."""
    cands = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return (min(cands), max(cands))


def isolate_real_roots(p: IntPolynomial, radius=Fraction(1, 10**12)
                       ) -> list[AlgebraicNumber]:
    """All real roots of p as refinable algebraic numbers, ascending,
    approximation radii at most ``radius``."""
    return AlgebraicNumber.real_roots(p, Fraction(radius))


# ---------------------------------------------------------------------------
# Z[q] canonical kernel


class ZqContext:
    """Exact arithmetic in Z[q] = Z[x]/(min_poly) for monic min_poly.

    Elements are integer coefficient tuples of length d in the basis
    1, q, ..., q^(d-1).  A zero tuple represents the real number zero
    because the minimal polynomial is irreducible (input contract).
    """

    def __init__(self, q: AlgebraicNumber):
        if not q.min_poly.is_monic:
            raise PreconditionError("monic minimal polynomial required")
        self.q = q
        self.d = q.min_poly.degree
        # q^d = -(c_0 + c_1 q + ... + c_{d-1} q^{d-1})
        self.qd_vec = tuple(-c for c in q.min_poly.coeffs[:-1])
        self._float_cache_key = None
        self._float_pows: list[tuple[float, float]] = []

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.d

    def from_int(self, s: int) -> tuple[int, ...]:
        return (int(s),) + (0,) * (self.d - 1)

    def mul_q(self, v: tuple[int, ...]) -> tuple[int, ...]:
        top = v[-1]
        shifted = (0,) + v[:-1]
        if top == 0:
            return shifted
        return tuple(a + top * b for a, b in zip(shifted, self.qd_vec))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def add_int(self, a, s: int):
        return (a[0] + s,) + a[1:]

    def step(self, v, s: int):
        """q*v + s: one digit-append step."""
        return self.add_int(self.mul_q(v), s)

    def from_digits(self, digits) -> tuple[int, ...]:
        """Canonical vector of sum digits[i] * q^i (ascending digits)."""
        acc = self.zero
        for s in reversed(list(digits)):
            acc = self.step(acc, int(s))
        return acc

    def sign(self, v) -> int:
        if not any(v):
            return 0
        flo, fhi = self.float_bounds(v)
        if flo > 0:
            return 1
        if fhi < 0:
            return -1
        return self.q.sign_of_fraction_vec(v)

    def compare(self, a, b) -> int:
        return self.sign(self.sub(a, b))

    def float_bounds(self, v) -> tuple[float, float]:
        """Fast conservative float enclosure of the value of v."""
        pows = self._float_powers(len(v) - 1)
        lo = hi = 0.0
        for c, (plo, phi) in zip(v, pows):
            if c >= 0:
                lo += c * plo
                hi += c * phi
            else:
                lo += c * phi
                hi += c * plo
        slop = 1e-12 * (abs(lo) + abs(hi) + 1.0) * len(v)
        return (lo - slop, hi + slop)

    def float_value(self, v) -> float:
        lo, hi = self.float_bounds(v)
        return 0.5 * (lo + hi)

    def _float_powers(self, upto: int):
        key = self.q.interval()
        if self._float_cache_key != key or len(self._float_pows) <= upto:
            if self._float_cache_key != key:
                self._float_pows = []
                self._float_cache_key = key
            lo, hi = key
            pows = self._float_pows or [(1.0, 1.0)]
            flo, fhi = float(lo), float(hi)
            while len(pows) <= upto + 1:
                plo, phi = pows[-1]
                pows.append((plo * flo * (1 - 1e-15), phi * fhi * (1 + 1e-15)))
            self._float_pows = pows
        return self._float_pows

    def ensure_float_resolution(self, bits: int = 80):
        """Refine the base interval so float enclosures are tight."""
        self.q.refine_to_width(Fraction(1, 2**bits))
        self._float_powers(self.d)


@dataclass(frozen=True)
class ZqElement:
    """Canonical representative of an element of Z[q]."""

    vec: tuple[int, ...]
    ctx: ZqContext = field(compare=False, repr=False)

    def sign(self) -> int:
        return self.ctx.sign(self.vec)

    def float_value(self) -> float:
        return self.ctx.float_value(self.vec)

    def value_interval(self):
        return self.ctx.q.value_interval_of_vec(self.vec)

    def __repr__(self):
        return f"ZqElement({self.vec}, ~{self.float_value():.9g})"


def zq_canonicalize(digits, q: AlgebraicNumber) -> ZqElement:
    """Exact canonical vector of sum digits[i] q^i; needs monic min_poly."""
    ctx = q.zq_context()
    return ZqElement(ctx.from_digits(digits), ctx)


def zq_compare(a: ZqElement, b: ZqElement) -> int:
    """-1, 0, +1 ordering; exact.  Elements must share a base."""
    if a.ctx is not b.ctx:
        raise PreconditionError("elements from different bases")
    return a.ctx.compare(a.vec, b.vec)


class FractionVecArith:
    """Exact arithmetic in Q[q] = Q[x]/(min_poly) for any algebraic base.

    Elements are Fraction coefficient tuples in the basis 1, q, ..., q^(d-1);
    works for non-monic minimal polynomials too (reduction divides by the
    leading coefficient).  Signs are exact via the base's sign oracle.
    """

    def __init__(self, q: AlgebraicNumber):
        self.q = q
        self.d = q.min_poly.degree
        lead = Fraction(q.min_poly.coeffs[-1])
        self.qd_vec = tuple(Fraction(-c, 1) / lead
                            for c in q.min_poly.coeffs[:-1])

    @property
    def zero(self):
        return (Fraction(0),) * self.d

    def from_fraction(self, c) -> tuple:
        return (Fraction(c),) + (Fraction(0),) * (self.d - 1)

    def mul_q(self, v):
        top = v[-1]
        shifted = (Fraction(0),) + v[:-1]
        if top == 0:
            return shifted
        return tuple(a + top * b for a, b in zip(shifted, self.qd_vec))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, c):
        c = Fraction(c)
        return tuple(c * x for x in a)

    def add_fraction(self, a, c):
        return (a[0] + Fraction(c),) + a[1:]

    def step(self, v, s):
        """q*v + s."""
        return self.add_fraction(self.mul_q(v), s)

    def mul(self, a, b):
        """Ring product of two elements."""
        acc = self.zero
        power = a
        for coeff in b:
            if coeff:
                acc = self.add(acc, self.scale(power, coeff))
            power = self.mul_q(power)
        return acc

    def sign(self, v) -> int:
        return self.q.sign_of_fraction_vec(v)

    def float_value(self, v) -> float:
        lo, hi = self.q.value_interval_of_vec(v)
        return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# conjugates with certified disks


@dataclass(frozen=True)
class ConjugateDisk:
    """One certified root disk: the true root lies within ``radius`` of
    center, and ``location`` is its certified position w.r.t. the unit
    circle ('inside' | 'outside' | 'on' | 'unresolved')."""

    re: Fraction
    im: Fraction
    radius: Fraction
    location: str
    multiplicity: int = 1

    def center_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def modulus_bounds(self) -> tuple[float, float]:
        if self.location == "on":
            return (1.0, 1.0)
        m = math.hypot(float(self.re), float(self.im))
        r = float(self.radius)
        return (max(0.0, m - r), m + r)

    def is_real(self) -> bool:
        return abs(float(self.im)) <= float(self.radius)


@dataclass(frozen=True)
class ConjugateSet:
    poly: IntPolynomial
    disks: tuple[ConjugateDisk, ...]
    resolved: bool
    precision_bits: int
    on_circle_count: int

    def count(self, location: str) -> int:
        return sum(1 for d in self.disks if d.location == location)


def unit_circle_root_count(p: IntPolynomial) -> int:
    """Exact number of roots of squarefree p on the unit circle.

    Roots on the circle are common roots of p and its reciprocal; the
    self-reciprocal gcd factor is converted to its trace polynomial in
    y = z + 1/z, whose real roots in (-2, 2) correspond to conjugate pairs
    on the circle.
    """
    g = poly_gcd(p, p.reciprocal())
    if g.degree <= 0:
        return 0
    count = 0
    for r in (Fraction(1), Fraction(-1)):
        if g.sign_at(r) == 0:
            count += 1
            g = deflate_root(g, r).primitive()
    if g.degree <= 0:
        return count
    if g != g.reciprocal().primitive():
        raise AssertionError("reciprocal gcd factor not self-reciprocal")
    if g.degree % 2:
        raise AssertionError("self-reciprocal factor of odd degree")
    e = g.degree // 2
    # trace polynomial: g(x)/x^e = h(x + 1/x)
    v_prev = IntPolynomial([2])
    v_cur = IntPolynomial([0, 1])
    h = IntPolynomial([g.coeffs[e]])
    for j in range(1, e + 1):
        h = h + v_cur.scale(g.coeffs[e + j])
        v_prev, v_cur = v_cur, IntPolynomial([0, 1]) * v_cur - v_prev
    count += 2 * count_roots_in(squarefree_part(h), Fraction(-2), Fraction(2))
    return count


def _dk_iterate(coeffs: tuple[int, ...], prec_bits: int, start=None):
    """Simultaneous Weierstrass/Durand-Kerner iteration at the given
    precision.  Returns approximations only; certification is separate."""
    d = len(coeffs) - 1
    lead = coeffs[-1]
    with workprec(prec_bits):
        bound = float(cauchy_root_bound(IntPolynomial(coeffs)))
        if start is None:
            seed = mpc("0.4", "0.9")
            z = []
            cur = mpc(1)
            for _ in range(d):
                cur = cur * seed
                z.append(cur * bound / abs(cur) * mpf("0.7"))
        else:
            z = [mpc(s) for s in start]
        tol = mpf(2) ** (-(prec_bits * 3) // 4) * max(1.0, bound)
        for _ in range(60 + 12 * prec_bits // 16):
            max_corr = mpf(0)
            for j in range(d):
                num = mpc(0)
                for c in reversed(coeffs):
                    num = num * z[j] + c
                den = mpc(lead)
                for i in range(d):
                    if i != j:
                        den *= z[j] - z[i]
                if den == 0:
                    z[j] = z[j] + mpf(2) ** (-prec_bits // 2)
                    max_corr = mpf(1)
                    continue
                w = num / den
                z[j] = z[j] - w
                if abs(w) > max_corr:
                    max_corr = abs(w)
            if max_corr < tol:
                break
        return z


def _certified_disks(coeffs: tuple[int, ...], z) -> list | None:
    """Exact Weierstrass a-posteriori disks.

    For distinct approximations z_j the disks centered z_j with radius
    d*|W_j| (W_j the Weierstrass correction) jointly contain all roots, and
    pairwise disjoint disks contain exactly one root each.  Everything is
    evaluated in exact Gaussian-rational arithmetic, so the result is a
    certificate, not an estimate.
    """
    d = len(coeffs) - 1
    lead = coeffs[-1]
    zf = [(mpf_to_fraction(w.real), mpf_to_fraction(w.imag)) for w in z]
    disks = []
    for j in range(d):
        den = (Fraction(lead), Fraction(0))
        for i in range(d):
            if i != j:
                diff = _gsub(zf[j], zf[i])
                if diff == (0, 0):
                    return None
                den = _gmul(den, diff)
        w = _gdiv(_gpolyval(coeffs, zf[j]), den)
        radius = d * (abs(w[0]) + abs(w[1]))
        disks.append((zf[j][0], zf[j][1], radius))
    for i in range(d):
        for j in range(i + 1, d):
            dre = disks[i][0] - disks[j][0]
            dim = disks[i][1] - disks[j][1]
            rr = disks[i][2] + disks[j][2]
            if dre * dre + dim * dim <= rr * rr:
                return None
    return disks


def _locate_disk(re: Fraction, im: Fraction, radius: Fraction) -> str:
    s2 = re * re + im * im
    if radius < 1:
        inside_lim = (1 - radius) ** 2
        if s2 < inside_lim:
            return "inside"
    outside_lim = (1 + radius) ** 2
    if s2 > outside_lim:
        return "outside"
    return "straddle"


def conjugates(p: IntPolynomial, radius=Fraction(1, 10**12),
               budget_bits: int = 4096) -> ConjugateSet:
    """All complex roots of squarefree p with certified disks and exact
    unit-circle location tags.

    Raises PreconditionError for non-squarefree input.  If the precision
    budget runs out before every off-circle root is certified inside or
    outside the unit circle, the set is returned with ``resolved=False``.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("need a nonconstant polynomial")
    if not is_squarefree(p):
        raise PreconditionError("polynomial is not squarefree")
    radius = Fraction(radius)

    coeffs = p.coeffs
    zero_disks = []
    if coeffs[0] == 0:
        # squarefree => simple root at the origin
        zero_disks.append(ConjugateDisk(Fraction(0), Fraction(0),
                                        Fraction(0), "inside"))
        coeffs = coeffs[1:]
    work = IntPolynomial(coeffs)
    d = work.degree
    if d == 0:
        return ConjugateSet(p, tuple(zero_disks), True, 0, 0)
    if d == 1:
        r = Fraction(-coeffs[0], coeffs[1])
        loc = "inside" if abs(r) < 1 else ("on" if abs(r) == 1 else "outside")
        disks = zero_disks + [ConjugateDisk(r, Fraction(0), Fraction(0), loc)]
        return ConjugateSet(p, tuple(sorted_disks(disks)), True, 0,
                            sum(1 for x in disks if x.location == "on"))

    on_count = unit_circle_root_count(work)
    prec = 64
    start = None
    best: list | None = None
    while prec <= budget_bits:
        z = _dk_iterate(coeffs, prec, start)
        start = z
        disks = _certified_disks(coeffs, z)
        if disks is not None:
            located = [(_locate_disk(re, im, rad), re, im, rad)
                       for re, im, rad in disks]
            n_straddle = sum(1 for loc, *_ in located if loc == "straddle")
            radius_ok = all(rad <= radius for _, _, _, rad in located)
            best = located
            if n_straddle == on_count and radius_ok:
                out = zero_disks + [
                    ConjugateDisk(re, im, rad,
                                  "on" if loc == "straddle" else loc)
                    for loc, re, im, rad in located]
                return ConjugateSet(p, tuple(sorted_disks(out)), True, prec,
                                    on_count)
        prec *= 2

    out = list(zero_disks)
    if best is not None:
        out += [ConjugateDisk(re, im, rad,
                              "unresolved" if loc == "straddle" else loc)
                for loc, re, im, rad in best]
    return ConjugateSet(p, tuple(sorted_disks(out)), False, prec // 2,
                        on_count)


def sorted_disks(disks):
    return sorted(disks, key=lambda x: (x.re, x.im))


# ---------------------------------------------------------------------------
# classification


PISOT_INTEGER = "PisotInteger"
PISOT = "Pisot"
NOT_PISOT = "NotPisot-AlgebraicInteger"
NOT_ALGEBRAIC_INTEGER = "NotAlgebraicInteger"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class NumberClass:
    tag: str
    conjugate_set: ConjugateSet | None = None
    detail: str = ""

    @property
    def is_pisot(self) -> bool:
        return self.tag in (PISOT, PISOT_INTEGER)

    def evidence(self) -> list[dict]:
        if self.conjugate_set is None:
            return []
        return [
            {"center": [float(d.re), float(d.im)],
             "radius": float(d.radius),
             "modulus_bounds": list(d.modulus_bounds()),
             "location": d.location}
            for d in self.conjugate_set.disks
        ]


def classify_base(q: AlgebraicNumber, budget_bits: int = 4096) -> NumberClass:
    """Theorem-grade Pisot classification of a base q > 1.

    Pisot iff the minimal polynomial is monic and every conjugate other
    than q has certified modulus < 1.  Irreducibility of the minimal
    polynomial is an input contract (cheap screen applied at construction).
    """
    if not q.greater_than(1):
        raise PreconditionError("base must satisfy q > 1")
    if q.irreducibility == "reducible":
        raise ReducibleInputError(
            "input may be reducible; classification requires a minimal "
            "polynomial")
    if q.exact_rational is not None:
        r = q.exact_rational
        if r.denominator == 1:
            return NumberClass(PISOT_INTEGER, None, f"rational integer {r}")
        return NumberClass(NOT_ALGEBRAIC_INTEGER, None,
                           f"rational non-integer {r}")
    if not q.min_poly.is_monic:
        return NumberClass(NOT_ALGEBRAIC_INTEGER, None,
                           "minimal polynomial is not monic")
    cs = conjugates(q.min_poly, budget_bits=budget_bits)
    if not cs.resolved:
        return NumberClass(INCONCLUSIVE, cs, "precision budget exhausted")
    n_out = cs.count("outside")
    n_on = cs.count("on")
    n_in = cs.count("inside")
    if n_on > 0 or n_out >= 2:
        return NumberClass(NOT_PISOT, cs,
                           f"{n_out} conjugates outside, {n_on} on the "
                           f"unit circle")
    if n_out == 1 and n_in == q.degree - 1:
        return NumberClass(PISOT, cs, "all other conjugates inside")
    return NumberClass(INCONCLUSIVE, cs, "unexpected disk configuration")


# ---------------------------------------------------------------------------
# powers


def _companion_matrix(p: IntPolynomial) -> list[list[Fraction]]:
    d = p.degree
    lead = Fraction(p.coeffs[-1])
    mat = [[Fraction(0)] * d for _ in range(d)]
    for j in range(d - 1):
        mat[j + 1][j] = Fraction(1)
    for i in range(d):
        mat[i][d - 1] = Fraction(-p.coeffs[i], 1) / lead
    return mat


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _charpoly(a) -> list[Fraction]:
    """Faddeev-LeVerrier; ascending coefficients of det(xI - A), monic."""
    n = len(a)
    coeffs_desc = [Fraction(1)]
    mk = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
          for i in range(n)]
    for k in range(1, n + 1):
        mk = _mat_mul(a, mk)
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs_desc.append(ck)
        for i in range(n):
            mk[i][i] += ck
    return list(reversed(coeffs_desc))


def power_base(q: AlgebraicNumber, k: int) -> AlgebraicNumber:
    """q^k as a certified algebraic number.

    The defining polynomial is the squarefree part of the characteristic
    polynomial of the multiplication-by-q^k matrix; it provably vanishes at
    q^k but is only irreducible by the usual input contract.
    """
    if k < 1:
        raise PreconditionError("exponent must be >= 1")
    if k == 1:
        return q
    if q.exact_rational is not None:
        return AlgebraicNumber.from_rational(q.exact_rational ** k)
    mat = _companion_matrix(q.min_poly)
    mk = mat
    for _ in range(k - 1):
        mk = _mat_mul(mk, mat)
    frac_coeffs = _charpoly(mk)
    den = math.lcm(*(c.denominator for c in frac_coeffs))
    char_int = IntPolynomial(int(c * den) for c in frac_coeffs)
    defining = squarefree_part(char_int)
    if defining.degree == 1:
        return AlgebraicNumber.from_rational(
            Fraction(-defining.coeffs[0], defining.coeffs[1]))
    chain = sturm_chain(defining)
    while True:
        lo, hi = q.interval()
        plo, phi = lo**k, hi**k
        if (defining.sign_at(plo) != 0 and defining.sign_at(phi) != 0
                and count_roots_in(defining, plo, phi, chain) == 1):
            return AlgebraicNumber(defining, plo, phi, _validated=True)
        q.refine_to_width((hi - lo) / 4)
