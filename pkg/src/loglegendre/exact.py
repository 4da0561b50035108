"""Exact integer/rational arithmetic primitives and dense polynomials.

Integers are plain Python ints (arbitrary precision, exact).  Rationals are
``fractions.Fraction`` values, always reduced with positive denominator.
Polynomials are dense coefficient lists in one variable, lowest degree first,
with no trailing zero coefficients; coefficients may be ints or Fractions
(both expose ``.numerator`` / ``.denominator``).

Everything in this module is pure and deterministic; values are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd, isqrt, log
from typing import Iterable, Union

Rational = Union[int, Fraction]

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# integers, primes, lcm
# ---------------------------------------------------------------------------

def binomial_integer(nn: int, m: int) -> int:
    """Generalized binomial C(nn, m) = nn(nn-1)...(nn-m+1)/m! for any integer nn.

    Exact; C(nn, m) = 0 when 0 <= nn < m, and the falling-factorial value
    (possibly signed) when nn < 0.
    """
    if m < 0:
        raise ValueError("lower index must be nonnegative")
    if nn >= 0:
        return comb(nn, m)
    num = 1
    for i in range(m):
        num *= nn - i
    return num // factorial(m)  # exact: m consecutive integers


def _sieve_upto(n: int) -> bytearray:
    flags = bytearray(b"\x01") * (n + 1)
    flags[:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, n + 1, p))
    return flags


def primes_in_range(lo, hi) -> list[int]:
    """All primes s with lo < s <= hi, ascending.

    Sieves in segments so memory stays bounded for large hi.
    """
    if lo < 0 or hi < lo:
        raise ValueError("need 0 <= lo <= hi")
    hi_i = int(hi)
    if hi_i < 2:
        return []
    root = isqrt(hi_i)
    base_flags = _sieve_upto(root)
    base = [p for p in range(2, root + 1) if base_flags[p]]
    out = [p for p in base if lo < p <= hi]
    seg = max(1 << 16, root)
    start = root + 1
    while start <= hi_i:
        stop = min(start + seg - 1, hi_i)
        flags = bytearray(b"\x01") * (stop - start + 1)
        for p in base:
            first = max(p * p, ((start + p - 1) // p) * p)
            if first <= stop:
                flags[first - start :: p] = b"\x00" * len(range(first, stop + 1, p))
        out.extend(i + start for i, f in enumerate(flags) if f and lo < i + start)
        start = stop + 1
    return out


@lru_cache(maxsize=None)
def lcm_upto(l: int) -> int:
    """lcm(1, ..., l) as an exact integer, via maximal prime powers <= l; lcm_upto(0) = 1."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l <= 1:
        return 1
    out = 1
    for p in primes_in_range(1, l):
        pk = p
        while pk * p <= l:
            pk *= p
        out *= pk
    return out


def log_lcm_upto(l: int) -> float:
    """log lcm(1..l) as a float (Chebyshev psi function), cheap for large l."""
    if l <= 1:
        return 0.0
    total = 0.0
    for p in primes_in_range(1, l):
        pk = p
        while pk * p <= l:
            pk *= p
        total += log(pk)
    return total


def prime_valuation(s: int, m: int) -> int:
    """Largest a with s**a dividing m; m must be nonzero."""
    if m == 0:
        raise ValueError("valuation of zero is undefined")
    if s < 2:
        raise ValueError("s must be a prime >= 2")
    m = abs(m)
    a = 0
    while m % s == 0:
        m //= s
        a += 1
    return a


# ---------------------------------------------------------------------------
# dense polynomials
# ---------------------------------------------------------------------------

def _normalize(coeffs: Iterable[Rational]) -> tuple[Rational, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class DensePoly:
    """Dense polynomial with exact rational coefficients, lowest degree first.

    Canonical form: no trailing zero coefficients; the zero polynomial has an
    empty coefficient tuple and degree -inf.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("DensePoly is immutable")

    # -- basics --------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(Fraction(c) for c in self.coeffs))

    def __repr__(self):
        return f"DensePoly({list(self.coeffs)!r})"

    def __getitem__(self, k: int) -> Rational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "DensePoly") -> "DensePoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DensePoly(out)

    def __neg__(self) -> "DensePoly":
        return DensePoly([-c for c in self.coeffs])

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        return self + (-other)

    def __mul__(self, other) -> "DensePoly":
        if isinstance(other, DensePoly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return DensePoly()
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] += ai * bj
            return DensePoly(out)
        return DensePoly([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DensePoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = DensePoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "DensePoly":
        """Multiply by z**k."""
        if not self.coeffs:
            return self
        return DensePoly([0] * k + list(self.coeffs))

    def evaluate(self, x: Rational) -> Rational:
        acc: Rational = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_one_minus(self) -> "DensePoly":
        """Return P(1 - z), exactly."""
        out = [0] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c:
                sign = 1
                for i in range(j + 1):
                    out[i] += c * sign * comb(j, i)
                    sign = -sign
        return DensePoly(out)

    def order_at_zero(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no finite order")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def order_at_one(self) -> int:
        """Multiplicity of the root z = 1 (0 if P(1) != 0)."""
        p = self
        k = 0
        while p.evaluate(1) == 0:
            p = p.deflate_at_one()
            k += 1
        return k

    def deflate_at_one(self) -> "DensePoly":
        """Exact division by (1 - z); requires P(1) == 0."""
        if self.evaluate(1) != 0:
            raise ValueError("polynomial does not vanish at 1")
        # P = (1-z) Q  =>  q_k = -(sum_{j>k} p_j ... ) ; synthetic division by (1-z)
        cs = list(self.coeffs)
        out = [0] * (len(cs) - 1)
        acc = 0
        for k in range(len(cs) - 1, 0, -1):
            acc += cs[k]
            out[k - 1] = -acc
        return DensePoly(out)

    def content_denominator(self) -> int:
        """Positive lcm of coefficient denominators (1 for integer polys)."""
        den = 1
        for c in self.coeffs:
            d = c.denominator
            den = den // gcd(den, d) * d
        return den

    def derivative(self) -> "DensePoly":
        return DensePoly([i * c for i, c in enumerate(self.coeffs)][1:])

    # -- serialization ---------------------------------------------------

    def render(self) -> str:
        """Canonical text form: one 'num/den' per line, lowest degree first."""
        return "\n".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs)

    @staticmethod
    def parse(text: str) -> "DensePoly":
        coeffs: list[Rational] = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            num, _, den = line.partition("/")
            f = Fraction(int(num), int(den) if den else 1)
            coeffs.append(f.numerator if f.denominator == 1 else f)
        out = DensePoly(coeffs)
        if len(out.coeffs) != len(coeffs):
            raise ValueError("non-canonical input: trailing zero coefficients")
        return out


def normalized_derivative(P: DensePoly, m: int) -> DensePoly:
    """m-th derivative divided by m!; sends z**k to C(k, m) z**(k-m)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return P
    cs = P.coeffs
    if len(cs) <= m:
        return DensePoly()
    out = [0] * (len(cs) - m)
    b = 1  # C(k, m) built iteratively from k = m
    for k in range(m, len(cs)):
        if cs[k]:
            out[k - m] = b * cs[k]
        b = b * (k + 1) // (k + 1 - m)
    return DensePoly(out)


# ---------------------------------------------------------------------------
# real-root counting (Sturm chains)
# ---------------------------------------------------------------------------

def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= f * c
        while a and a[-1] == 0:
            a.pop()
        if not a:
            break
    return a


def _primitive(cs: list[Fraction]) -> list[Fraction]:
    if not cs:
        return cs
    den = 1
    for c in cs:
        den = den // gcd(den, c.denominator) * c.denominator
    num = gcd(*(abs(c.numerator * (den // c.denominator)) for c in cs))
    if num == 0:
        return cs
    return [Fraction(c.numerator * (den // c.denominator) // num) for c in cs]


def _squarefree(cs: list[Fraction]) -> list[Fraction]:
    d = [i * c for i, c in enumerate(cs)][1:]
    g = cs
    h = d
    while h:
        g, h = h, _poly_rem(g, h)
        g = _primitive(g)
        h = _primitive(h)
    if len(g) <= 1:
        return cs
    # exact division cs / g
    q: list[Fraction] = []
    rem = cs[:]
    while len(rem) >= len(g):
        f = rem[-1] / g[-1]
        q.append(f)
        off = len(rem) - len(g)
        for i, c in enumerate(g):
            rem[off + i] -= f * c
        rem.pop()
        while rem and rem[-1] == 0 and len(rem) >= len(g):
            q.append(Fraction(0))
            rem.pop()
    return list(reversed(q))


def count_real_roots_in(P: DensePoly, a: Rational, b: Rational) -> int:
    """Number of distinct real roots of P in the half-open interval (a, b]."""
    cs = [Fraction(c) for c in P.coeffs]
    if len(cs) <= 1:
        return 0
    cs = _squarefree(cs)
    chain = [cs, _primitive([i * c for i, c in enumerate(cs)][1:])]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive([-c for c in r]))

    def variations(x: Rational) -> int:
        signs = []
        for p in chain:
            acc: Rational = 0
            for c in reversed(p):
                acc = acc * x + c
            if acc != 0:
                signs.append(1 if acc > 0 else -1)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(a) - variations(b)
