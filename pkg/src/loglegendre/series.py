"""Independent reconstruction of the polynomials through their power series.

With w = z/(z-1) (so (1-w)(1-z) = 1), every polynomial P(z) satisfies
(1-z) P(z) = sum_k Q(k) w^k for a unique polynomial Q of the same degree,
because (1-z)(1-z)^j = 1/(1-w)^(j+1) = sum_k C(k+j, j) w^k.  For the
constructed Legendre polynomials the series coefficients factor as a
product of binomials,

    Q(k) = prod_j C(k + p_j t, (p_j + q_j) t),

which this module uses to rebuild the polynomial by exact interpolation,
giving a brute-force oracle that never touches the differential operators.
It also hosts the combinatorial identities tying the transform T to the
formal k-derivative of Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InternalCheckError, ParamError
from .exact import DensePoly, Rational, binomial_integer
from .legendre import ParamSet, christoffel_transform

DEFAULT_ORACLE_CAP = 200


@dataclass(frozen=True)
class KPolynomial:
    """Polynomial in the series summation variable k, dense, lowest degree first."""

    coeffs: tuple[Rational, ...]

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def evaluate(self, k: Rational) -> Rational:
        acc: Rational = 0
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def derivative(self, order: int = 1) -> "KPolynomial":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return KPolynomial(cs)

    def __eq__(self, other):
        if isinstance(other, KPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __neg__(self):
        return KPolynomial([-c for c in self.coeffs])


def series_coefficient(params: ParamSet, t: int, k: int) -> int:
    """k-th series coefficient prod_j C(k + p_j t, (p_j + q_j) t), exact."""
    if k < 0:
        raise ParamError("k must be nonnegative")
    out = 1
    for p, q in params.pairs():
        out *= binomial_integer(k + p * t, (p + q) * t)
        if out == 0:
            return 0
    return out


# ---------------------------------------------------------------------------
# the basis change P <-> Q
# ---------------------------------------------------------------------------

def _rising_binomial_basis(deg: int) -> list[list[Fraction]]:
    """B_j(k) = C(k+j, j) in monomial form, for j = 0..deg."""
    basis = [[Fraction(1)]]
    for j in range(1, deg + 1):
        prev = basis[-1]
        nxt = [Fraction(0)] * (len(prev) + 1)
        for i, b in enumerate(prev):  # multiply by (k + j) / j
            nxt[i + 1] += b
            nxt[i] += b * j
        basis.append([x / j for x in nxt])
    return basis


def p_to_q(P: DensePoly) -> KPolynomial:
    """The Q with (1-z) P(z) = sum_k Q(k) w^k."""
    if P.is_zero():
        return KPolynomial()
    deg = len(P.coeffs) - 1
    # expand P in powers of (1-z): P = sum_j a_j (1-z)^j
    a = [Fraction(0)] * (deg + 1)
    for j, c in enumerate(P.coeffs):
        if c:
            sign = 1
            for i in range(j + 1):
                a[i] += c * sign * binomial_integer(j, i)
                sign = -sign
    basis = _rising_binomial_basis(deg)
    out = [Fraction(0)] * (deg + 1)
    for j in range(deg + 1):
        if a[j]:
            for i, b in enumerate(basis[j]):
                out[i] += a[j] * b
    return KPolynomial(out)


def q_to_p(Q: KPolynomial) -> DensePoly:
    """Inverse basis change: the P with (1-z) P(z) = sum_k Q(k) w^k."""
    if not Q.coeffs:
        return DensePoly()
    deg = len(Q.coeffs) - 1
    basis = _rising_binomial_basis(deg)
    rem = [Fraction(c) for c in Q.coeffs]
    a = [Fraction(0)] * (deg + 1)
    for j in range(deg, -1, -1):
        lead = rem[j] if j < len(rem) else Fraction(0)
        if lead:
            aj = lead / basis[j][j]
            a[j] = aj
            for i, b in enumerate(basis[j]):
                rem[i] -= aj * b
    if any(rem):
        raise InternalCheckError("basis peel left a remainder")
    # P = sum_j a_j (1-z)^j
    out = [Fraction(0)] * (deg + 1)
    pw = [Fraction(1)]
    for j in range(deg + 1):
        if a[j]:
            for i, c in enumerate(pw):
                out[i] += a[j] * c
        if j < deg:
            nxt = [Fraction(0)] * (len(pw) + 1)
            for i, c in enumerate(pw):
                nxt[i] += c
                nxt[i + 1] -= c
            pw = nxt
    return DensePoly(out)


# ---------------------------------------------------------------------------
# interpolation and the oracle
# ---------------------------------------------------------------------------

def interpolate_at_integers(values: Sequence[Rational]) -> KPolynomial:
    """The unique polynomial of degree < len(values) through (i, values[i]).

    Forward differences on the nodes 0..d, assembled in the falling
    factorial basis C(k, j); exact throughout.
    """
    if not values:
        return KPolynomial()
    diffs = [Fraction(v) for v in values]
    deg = len(values) - 1
    out = [Fraction(0)] * (deg + 1)
    basis = [Fraction(1)]  # C(k, 0)
    for j in range(deg + 1):
        lead = diffs[0]
        if lead:
            for i, b in enumerate(basis):
                out[i] += lead * b
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        if j < deg:
            nxt = [Fraction(0)] * (len(basis) + 1)
            for i, b in enumerate(basis):  # multiply by (k - j) / (j + 1)
                nxt[i + 1] += b
                nxt[i] -= b * j
            basis = [x / (j + 1) for x in nxt]
    return KPolynomial(out)


def series_k_polynomial(params: ParamSet, t: int) -> KPolynomial:
    """Q(k) recovered by interpolating the binomial products at k = 0..M*t."""
    d = params.total_degree * t
    return interpolate_at_integers(
        [series_coefficient(params, t, k) for k in range(d + 1)])


def oracle_legendre(params: ParamSet, t: int, cap: int = DEFAULT_ORACLE_CAP) -> DensePoly:
    """Rebuild the Legendre polynomial from its series coefficients alone."""
    if params.total_degree * t > cap:
        raise ParamError(f"oracle capped at M*t <= {cap}")
    Q = series_k_polynomial(params, t)
    P = q_to_p(Q)
    bad = next((c for c in P.coeffs if c.denominator != 1), None)
    if bad is not None:
        raise InternalCheckError("oracle reconstruction is not integral")
    return DensePoly([int(c) for c in P.coeffs])


# ---------------------------------------------------------------------------
# combinatorial identities
# ---------------------------------------------------------------------------

def hyperharmonic_identity(j: int, k: int) -> tuple[bool, Fraction, Fraction]:
    """C(k+j, j) sum_{i=1..j} 1/(k+i)  ==  sum_{i=1..j} C(k+j-i, j-i)/i.

    Returns (holds, lhs, rhs) so failures carry their counterexample.
    """
    if j < 0 or k < 0:
        raise ParamError("j and k must be nonnegative")
    lhs = binomial_integer(k + j, j) * sum(
        (Fraction(1, k + i) for i in range(1, j + 1)), Fraction(0))
    rhs = sum((Fraction(binomial_integer(k + j - i, j - i), i)
               for i in range(1, j + 1)), Fraction(0))
    return lhs == rhs, lhs, rhs


def derivative_series_identity(P: DensePoly) -> bool:
    """Transform versus formal derivative: p_to_q(T(P)) == -(d/dk) p_to_q(P).

    The sign is forced by the defining integral: T((1-z)^j) equals
    -sum_{i=1..j} (1-z)^(j-i)/i, so the series side picks up a minus sign
    relative to the bare k-derivative.
    """
    lhs = p_to_q(christoffel_transform(P))
    rhs = -p_to_q(P).derivative()
    return lhs == rhs
