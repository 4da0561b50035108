"""Multiple Legendre polynomials, the averaging transform T, and log forms.

The polynomials are built by composing differential operators

    D[p,q](P) = z^q (1-z)^p D_{p+q}( z^p (1-z)^q P(z) ),

where D_m is the m-th derivative divided by m!.  Applying D[p_1*t, q_1*t]
after ... after D[p_n*t, q_n*t] to the constant 1 yields an integer
polynomial of degree M*t with M = sum(p_l + q_l).  The transform

    T(P)(z) = integral_0^1 (P(z) - P(y)) / (z - y) dy

acts on monomials by T(z^k) = sum_{i<k} z^i / (k-i) and produces the
companion rational polynomials; the associated log forms are

    L(z) * log(z/(z-1))^j - T^j(L)(z),

which are exponentially small compared to their two terms when z < 0.
Evaluating them therefore needs the cancellation-aware precision policy
implemented in :func:`legendre_function_value`.

Construction and transforms are pure integer/rational work, safe across
threads; the form evaluations set the floating-point library's
process-global precision, so parallelize those across processes instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .errors import InternalCheckError, ParamError, PrecisionError
from .exact import DensePoly, count_real_roots_in, lcm_upto

DEFAULT_IDENTITY_CAP = 60          # largest M*t the identity suite will accept
DEFAULT_GRID_STEP = Fraction(1, 1000)
DEFAULT_MAX_WORKING_BITS = 1 << 22


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamSet:
    """One problem instance: exponent tuples p, q, evaluation point z = a/b.

    Constraints: every p_j >= 1 and q_j >= 0; z is a reduced rational outside
    [0, 1] (the canonical instances have z < 0).  When the form order m is
    given, 1 <= m <= n-1 and both p_1 <= ... <= p_{m+1} and
    q_1 <= ... <= q_{m+1} must hold.
    """

    p: tuple[int, ...]
    q: tuple[int, ...]
    z: Fraction
    m: Optional[int] = None

    def __post_init__(self):
        p, q = tuple(self.p), tuple(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "z", Fraction(self.z))
        if not p or len(p) != len(q):
            raise ParamError("p and q must be nonempty tuples of equal length")
        if any(x <= 0 for x in p):
            raise ParamError("all p_j must be positive")
        if any(x < 0 for x in q):
            raise ParamError("all q_j must be nonnegative")
        if 0 <= self.z <= 1:
            raise ParamError("z must lie outside [0, 1]")
        if self.m is not None:
            if not 1 <= self.m <= self.n - 1:
                raise ParamError(f"m must satisfy 1 <= m <= {self.n - 1}")
            k = self.m + 1
            if list(p[:k]) != sorted(p[:k]) or list(q[:k]) != sorted(q[:k]):
                raise ParamError(
                    "monotonicity violated: need p_1 <= ... <= p_(m+1) "
                    "and q_1 <= ... <= q_(m+1)"
                )

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def total_degree(self) -> int:
        """M = sum(p_l + q_l); the degree of the polynomial at t = 1."""
        return sum(self.p) + sum(self.q)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.p, self.q))

    def describe(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "p": list(self.p),
            "q": list(self.q),
            "z": f"{self.z.numerator}/{self.z.denominator}",
        }


@dataclass(frozen=True)
class LegendreRecord:
    """A constructed polynomial at scale t together with its T-iterates."""

    t: int
    L: DensePoly
    transforms: tuple[DensePoly, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# construction (integer fast path)
# ---------------------------------------------------------------------------

def _one_minus_z_row(k: int) -> list[int]:
    """Coefficients of (1-z)^k."""
    row = [0] * (k + 1)
    b = 1
    for i in range(k + 1):
        row[i] = b if i % 2 == 0 else -b
        b = b * (k - i) // (i + 1)
    return row


def _mul_one_minus_z_pow(c: list[int], k: int) -> list[int]:
    if k == 0:
        return c
    row = _one_minus_z_row(k)
    out = [0] * (len(c) + k)
    for i, ci in enumerate(c):
        if ci:
            for j, rj in enumerate(row):
                out[i + j] += ci * rj
    return out


def _dpq_int(p: int, q: int, c: list[int]) -> list[int]:
    """Apply D[p,q] to an integer coefficient list; closed over the integers."""
    x = _mul_one_minus_z_pow(c, q)
    m = p + q
    if len(x) + p <= m:
        return []
    # D_{p+q}(z^p * x): coefficient j of x contributes C(j+p, m) at z^{j-q}
    y = []
    b = 1  # C(q+p, m) = 1, then C(j+p+1, m) = C(j+p, m)(j+p+1)/(j+p+1-m)
    jp = q + p
    for j in range(q, len(x)):
        y.append(b * x[j])
        b = b * (jp + 1) // (jp + 1 - m)
        jp += 1
    out = _mul_one_minus_z_pow(y, p)
    return [0] * q + out


def _legendre_scaled(pairs: Sequence[tuple[int, int]], t: int) -> list[int]:
    """Integer coefficients of the composition over (p_l*t, q_l*t), last pair innermost."""
    c = [1]
    for p, q in reversed(list(pairs)):
        c = _dpq_int(p * t, q * t, c)
    while c and c[-1] == 0:
        c.pop()
    return c


def apply_dpq(p: int, q: int, P: DensePoly) -> DensePoly:
    """z^q (1-z)^p D_{p+q}( z^p (1-z)^q P ), exact for rational input."""
    if p < 0 or q < 0:
        raise ParamError("p and q must be nonnegative")
    if P.is_zero():
        return P
    den = P.content_denominator()
    nums = [int(c * den) for c in P.coeffs]
    out = _dpq_int(p, q, nums)
    if den == 1:
        return DensePoly(out)
    return DensePoly([Fraction(c, den) for c in out])


def legendre_poly(params: ParamSet, t: int) -> DensePoly:
    """The multiple Legendre polynomial at scale t; integer coefficients, degree M*t."""
    if t < 1:
        raise ParamError("t must be >= 1")
    coeffs = _legendre_scaled(params.pairs(), t)
    poly = DensePoly(coeffs)
    if poly.degree != params.total_degree * t:
        raise InternalCheckError(
            f"degree {poly.degree} != {params.total_degree * t} after construction"
        )
    return poly


def legendre_reduced(params: ParamSet, t: int, L: Optional[DensePoly] = None) -> DensePoly:
    """Strip the forced boundary factors: (-1)^(q_1 t) z^(-q_1 t) (1-z)^(-p_1 t) L.

    The division is exact (the polynomial vanishes to order >= q_1 t at 0 and
    >= p_1 t at 1); a nonzero remainder signals a construction bug.
    """
    if L is None:
        L = legendre_poly(params, t)
    q1t, p1t = params.q[0] * t, params.p[0] * t
    cs = list(L.coeffs)
    if any(c != 0 for c in cs[:q1t]):
        raise InternalCheckError("vanishing order at z=0 below q_1*t")
    cs = cs[q1t:]
    poly = DensePoly(cs)
    for _ in range(p1t):
        if poly.evaluate(1) != 0:
            raise InternalCheckError("vanishing order at z=1 below p_1*t")
        poly = poly.deflate_at_one()
    # each deflation removed a factor (1-z); fix the overall sign
    if q1t % 2:
        poly = -poly
    return poly


# ---------------------------------------------------------------------------
# the transform T
# ---------------------------------------------------------------------------

def christoffel_transform(P: DensePoly) -> DensePoly:
    """T(P)(z) = integral_0^1 (P(z)-P(y))/(z-y) dy, via T(z^k) = sum_{i<k} z^i/(k-i)."""
    d = len(P.coeffs) - 1
    if d <= 0:
        return DensePoly()
    den = P.content_denominator()
    nums = [int(c * den) for c in P.coeffs]
    big = lcm_upto(d)
    inv = [0] + [big // j for j in range(1, d + 1)]  # big/j
    out = [0] * d
    for k in range(1, d + 1):
        ck = nums[k]
        if ck:
            for i in range(k):
                out[i] += ck * inv[k - i]
    full_den = den * big
    return DensePoly([Fraction(c, full_den) for c in out])


def transform_iterates(params: ParamSet, t: int, L: DensePoly, m: int) -> list[DensePoly]:
    """[T(L), T^2(L), ..., T^m(L)]; m must respect the monotonicity bound."""
    if params.m is None or m > params.m:
        raise ParamError("m exceeds the order carried by the parameter set")
    if m < 1:
        raise ParamError("m must be >= 1")
    out = []
    cur = L
    for _ in range(m):
        cur = christoffel_transform(cur)
        out.append(cur)
    return out


def build_record(params: ParamSet, t: int) -> LegendreRecord:
    L = legendre_poly(params, t)
    transforms: tuple[DensePoly, ...] = ()
    if params.m:
        transforms = tuple(transform_iterates(params, t, L, params.m))
    return LegendreRecord(t=t, L=L, transforms=transforms)


def christoffel_value(P: DensePoly, z: Fraction) -> Fraction:
    """T(P)(z) as an exact rational, in O(deg) big-integer operations.

    Uses suffix evaluations S_j = sum_{k>=j} c_k z^(k-j), which satisfy
    S_j = c_j + z S_{j+1}, and T(P)(z) = sum_j S_j / j.
    """
    d = len(P.coeffs) - 1
    if d <= 0:
        return Fraction(0)
    den = P.content_denominator()
    nums = [int(c * den) for c in P.coeffs]
    a, b = z.numerator, z.denominator
    bp = [1] * (d + 1)
    for i in range(1, d + 1):
        bp[i] = bp[i - 1] * b
    big = lcm_upto(d)
    u = nums[d]
    total = u * (big // d) * bp[d - 1]
    for j in range(d - 1, 0, -1):
        u = nums[j] * bp[d - j] + a * u
        total += u * (big // j) * bp[j - 1]
    return Fraction(total, den * big * bp[d - 1])


def eval_at_rational(P: DensePoly, z: Fraction) -> Fraction:
    """P(z) as an exact rational (integer-arithmetic Horner)."""
    d = len(P.coeffs) - 1
    if d < 0:
        return Fraction(0)
    den = P.content_denominator()
    nums = [int(c * den) for c in P.coeffs]
    a, b = z.numerator, z.denominator
    acc = 0
    bp = 1
    for k in range(d, -1, -1):
        acc = acc * a + nums[k] * bp
        bp *= b
    return Fraction(acc, den * b**d)


# ---------------------------------------------------------------------------
# high-precision log forms
# ---------------------------------------------------------------------------

def _bit_magnitude(x: Fraction) -> int:
    if x == 0:
        return 0
    return max(0, x.numerator.bit_length() - x.denominator.bit_length())


def _mpf_from_fraction(x: Fraction) -> mp.mpf:
    return mp.mpf(x.numerator) / x.denominator


def form_terms(params: ParamSet, t: int, j: int,
               L: Optional[DensePoly] = None) -> tuple[Fraction, Fraction]:
    """Exact values (L(z), T^j(L)(z)) feeding the j-th log form."""
    if params.m is None or not 1 <= j <= params.m:
        raise ParamError("need 1 <= j <= m")
    if L is None:
        L = legendre_poly(params, t)
    z = params.z
    poly = L
    for _ in range(j - 1):
        poly = christoffel_transform(poly)
    return eval_at_rational(L, z), christoffel_value(poly, z)


def legendre_function_value(params: ParamSet, t: int, j: int, precision: int,
                            L: Optional[DensePoly] = None,
                            max_working_bits: int = DEFAULT_MAX_WORKING_BITS) -> mp.mpf:
    """Value of the j-th log form L(z) log^j(z/(z-1)) - T^j(L)(z) at z = a/b.

    The form is an exponentially small difference of exponentially large
    terms, so the working precision is raised above the exact bit magnitude
    of the terms, then once more after the result's own scale is known, so
    the returned value carries `precision` significant bits.
    """
    lz, tz = form_terms(params, t, j, L=L)
    w = params.z / (params.z - 1)
    magbits = max(_bit_magnitude(lz), _bit_magnitude(tz), 1)

    def compute(workbits: int) -> mp.mpf:
        if workbits > max_working_bits:
            raise PrecisionError(
                f"working precision {workbits} bits exceeds cap {max_working_bits}"
            )
        with mp.workprec(workbits):
            logw = mp.log(_mpf_from_fraction(w))
            return _mpf_from_fraction(lz) * logw**j - _mpf_from_fraction(tz)

    # the difference only becomes trustworthy once it clears the rounding
    # noise floor 2^(magbits - workbits + guard); below that, double up
    work = precision + magbits + 64
    while True:
        val = compute(work)
        if val != 0 and mp.mag(val) > magbits - work + 24:
            break
        work *= 2
    needed = precision + magbits - mp.mag(val) + 64
    if needed > work:
        val = compute(needed)
    with mp.workprec(precision):
        return +val


def reduced_form_value(params: ParamSet, t: int, j: int, precision: int,
                       L: Optional[DensePoly] = None) -> mp.mpf:
    """The log form scaled by z^(-q_1 t) (1-z)^(-p_1 t), the object whose decay
    rate enters the measure computation."""
    raw = legendre_function_value(params, t, j, precision, L=L)
    z = params.z
    pref = z ** (-params.q[0] * t) * (1 - z) ** (-params.p[0] * t)
    with mp.workprec(precision + 64):
        return raw * _mpf_from_fraction(pref)


# ---------------------------------------------------------------------------
# structural identity checks
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    name: str
    passed: bool
    witness: Optional[str] = None


def check_integer_coefficients(L: DensePoly) -> IdentityReport:
    bad = next((i for i, c in enumerate(L.coeffs) if c.denominator != 1), None)
    return IdentityReport(
        "integer-coefficients", bad is None,
        None if bad is None else f"coefficient of z^{bad} is {L.coeffs[bad]}")


def check_degree_and_orders(params: ParamSet, t: int, L: DensePoly) -> IdentityReport:
    want_deg = params.total_degree * t
    want_ord0 = max(params.q) * t
    want_ord1 = max(params.p) * t
    deg, o0, o1 = L.degree, L.order_at_zero(), L.order_at_one()
    ok = (deg, o0, o1) == (want_deg, want_ord0, want_ord1)
    return IdentityReport(
        "degree-and-orders", ok,
        None if ok else f"got deg={deg} ord0={o0} ord1={o1}, "
                        f"want {want_deg}/{want_ord0}/{want_ord1}")


def check_pair_symmetry(params: ParamSet, t: int, rng: random.Random) -> IdentityReport:
    base = legendre_poly(params, t)
    idx = list(range(params.n))
    trials = 6 if params.n > 3 else None
    perms = ([tuple(rng.sample(idx, len(idx))) for _ in range(trials)] if trials
             else list(__import__("itertools").permutations(idx)))
    for perm in perms:
        p = tuple(params.p[i] for i in perm)
        q = tuple(params.q[i] for i in perm)
        other = DensePoly(_legendre_scaled(list(zip(p, q)), t))
        if other != base:
            return IdentityReport("pair-symmetry", False, f"permutation {perm}")
    return IdentityReport("pair-symmetry", True)


def _factorial_multiplier(p: Sequence[int], q: Sequence[int], t: int) -> int:
    out = 1
    for a, b in zip(p, q):
        f = 1
        for i in range(2, (a + b) * t + 1):
            f *= i
        out *= f
    return out


def check_bisymmetry(params: ParamSet, t: int, rng: random.Random) -> IdentityReport:
    """prod((p_l+q_l)t)! * L is invariant under independent permutations of p and q."""
    base = _factorial_multiplier(params.p, params.q, t) * legendre_poly(params, t)
    idx = list(range(params.n))
    for _ in range(4):
        pp = tuple(params.p[i] for i in rng.sample(idx, len(idx)))
        qq = tuple(params.q[i] for i in rng.sample(idx, len(idx)))
        other = _factorial_multiplier(pp, qq, t) * DensePoly(
            _legendre_scaled(list(zip(pp, qq)), t))
        if other != base:
            return IdentityReport("bisymmetry", False, f"p={pp} q={qq}")
    return IdentityReport("bisymmetry", True)


def check_mirror(params: ParamSet, t: int) -> IdentityReport:
    """L(p,q; z) = (-1)^(M t) L(q,p; 1-z), exactly."""
    left = legendre_poly(params, t)
    swapped = DensePoly(_legendre_scaled([(q, p) for p, q in params.pairs()], t))
    right = swapped.compose_one_minus()
    if (params.total_degree * t) % 2:
        right = -right
    ok = left == right
    return IdentityReport("mirror", ok, None if ok else "mirror mismatch")


def check_unit_interval_bound(params: ParamSet, t: int,
                              step: Fraction = DEFAULT_GRID_STEP) -> IdentityReport:
    """Grid-sampled sup of |reduced polynomial| on [0,1] against (Mt)!/prod((p+q)t)!."""
    core = legendre_reduced(params, t)
    bound = Fraction(1)
    for i in range(2, params.total_degree * t + 1):
        bound *= i
    bound /= _factorial_multiplier(params.p, params.q, t)
    x = Fraction(0)
    while x <= 1:
        val = abs(core.evaluate(x))
        if val > bound:
            return IdentityReport("unit-interval-bound", False,
                                  f"|core({x})| = {val} > {bound}")
        x += step
    return IdentityReport("unit-interval-bound", True)


def check_roots_in_unit_interval(params: ParamSet, t: int) -> IdentityReport:
    core = legendre_reduced(params, t)
    # roots exactly at 0 or 1 are inside [0,1]; strip them so the half-open
    # Sturm intervals below cannot miscount the endpoints
    cs = list(core.coeffs[core.order_at_zero():])
    core = DensePoly(cs)
    while core.degree >= 1 and core.evaluate(1) == 0:
        core = core.deflate_at_one()
    if core.degree < 1:
        return IdentityReport("roots-in-unit-interval", True)
    radius = 2 + max(abs(Fraction(c)) for c in core.coeffs) / abs(Fraction(core.coeffs[-1]))
    outside = (count_real_roots_in(core, -radius, Fraction(0))
               + count_real_roots_in(core, Fraction(1), radius))
    return IdentityReport("roots-in-unit-interval", outside == 0,
                          None if outside == 0 else f"{outside} roots outside [0,1]")


def check_orthogonality(params: ParamSet, t: int, rng: random.Random) -> IdentityReport:
    """T^m(W * reduced) = W * T^m(reduced) for integer W, deg W <= (p_1+q_1) t."""
    if params.m is None:
        return IdentityReport("orthogonality", True, "skipped: no m")
    core = legendre_reduced(params, t)
    degw = (params.p[0] + params.q[0]) * t
    W = DensePoly([rng.randint(-9, 9) for _ in range(degw)] + [rng.randint(1, 9)])
    lhs, rhs = W * core, core
    for _ in range(params.m):
        lhs = christoffel_transform(lhs)
        rhs = christoffel_transform(rhs)
    ok = lhs == W * rhs
    return IdentityReport("orthogonality", ok,
                          None if ok else f"W={list(W.coeffs)}")


def check_trivial_integrality(params: ParamSet, t: int) -> IdentityReport:
    """The lcm multiplier d_{H1 t} d_{max(H2 t, [H1 t/2])} ... clears T^m(L)."""
    if params.m is None:
        return IdentityReport("trivial-integrality", True, "skipped: no m")
    L = legendre_poly(params, t)
    mult = trivial_clearing_multiplier(params, t)
    cur = L
    for _ in range(params.m):
        cur = christoffel_transform(cur)
    bad = next((i for i, c in enumerate(cur.coeffs)
                if (mult * c).denominator != 1), None)
    return IdentityReport("trivial-integrality", bad is None,
                          None if bad is None else f"coefficient of z^{bad}")


def trivial_clearing_multiplier(params: ParamSet, t: int) -> int:
    """d_{H_1 t} * prod_{j=2..m} d_{max(H_j t, floor(H_1 t / j))} with H the
    diagonal sums p_l + q_l sorted descending."""
    if params.m is None:
        raise ParamError("multiplier needs the form order m")
    H = sorted((p + q for p, q in params.pairs()), reverse=True)
    out = lcm_upto(H[0] * t)
    for j in range(2, params.m + 1):
        out *= lcm_upto(max(H[j - 1] * t, H[0] * t // j))
    return out


def structural_identity_suite(params: ParamSet, t: int,
                              grid_step: Fraction = DEFAULT_GRID_STEP,
                              cap: int = DEFAULT_IDENTITY_CAP,
                              seed: int = 0) -> list[IdentityReport]:
    """Run every applicable exact identity check on a small instance."""
    if params.total_degree * t > cap:
        raise ParamError(f"instance too large for identity suite (M*t > {cap})")
    rng = random.Random(seed)
    L = legendre_poly(params, t)
    reports = [
        check_integer_coefficients(L),
        check_degree_and_orders(params, t, L),
        check_pair_symmetry(params, t, rng),
        check_bisymmetry(params, t, rng),
        check_mirror(params, t),
        check_unit_interval_bound(params, t, step=grid_step),
        check_roots_in_unit_interval(params, t),
    ]
    if params.m is not None:
        reports.append(check_orthogonality(params, t, rng))
        reports.append(check_trivial_integrality(params, t))
    return reports
