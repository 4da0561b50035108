"""Arithmetic of the guaranteed coefficient divisors.

The transform iterates of a scaled Legendre polynomial have denominators
cleared by a product of lcm's d_{N_j t}, and their numerators share a large
prime-power divisor

    Delta_t = prod_{s prime, s^2 > N_1 t} s^mu({t/s}),

where mu(omega) is the largest gain the floor sums sum_j [(p_j + q_j) omega]
can make when the q's are permuted against the p's.  mu is a step function
with rational breakpoints, and (1/t) log Delta_t converges to a digamma
expression over those breakpoints.  Everything here is exact except the
digamma evaluations, which carry explicit precision.

All results are deterministic.  The exact integer/rational layer is safe to
use from threads; the digamma layer leans on the floating-point library's
process-global precision context, so run parallel numeric work in separate
processes (as the CLI does), not threads.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import floor
from typing import Optional, Sequence

import mpmath as mp

from .errors import InternalCheckError, ParamError
from .exact import DensePoly, lcm_upto, primes_in_range
from .legendre import ParamSet

MAX_BRUTE_FORCE_N = 9  # 9! permutations is the largest sane exhaustive search


# ---------------------------------------------------------------------------
# exponent bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentProfile:
    """Sorted cross sums K, lcm exponents N, and diagonal sums H."""

    cross_sums: tuple[int, ...]          # all p_i + q_j, descending
    lcm_exponents: tuple[Fraction, ...]  # N_j = max(K_j, K_1/j), j = 1..n
    diagonal_sums: tuple[int, ...]       # p_l + q_l, descending

    def lcm_index(self, j: int, t: int) -> int:
        """Integer index floor(N_j * t) = max(K_j t, floor(K_1 t / j))."""
        return max(self.cross_sums[j - 1] * t, self.cross_sums[0] * t // j)


def exponent_profile(params: ParamSet) -> ExponentProfile:
    K = sorted((p + q for p in params.p for q in params.q), reverse=True)
    N = [max(Fraction(K[j - 1]), Fraction(K[0], j)) for j in range(1, params.n + 1)]
    H = sorted((p + q for p, q in params.pairs()), reverse=True)
    return ExponentProfile(tuple(K), tuple(N), tuple(H))


# ---------------------------------------------------------------------------
# the floor-gain function mu and its step profile
# ---------------------------------------------------------------------------

def floor_gain(params: ParamSet, omega: Fraction) -> int:
    """max over permutations of sum_j ([(p_j + q_sigma(j)) w] - [(p_j + q_j) w])."""
    omega = Fraction(omega)
    if not 0 <= omega < 1:
        raise ParamError("omega must lie in [0, 1)")
    n = params.n
    if n > MAX_BRUTE_FORCE_N:
        raise ParamError(f"floor_gain brute force is capped at n <= {MAX_BRUTE_FORCE_N}")
    p, q = params.p, params.q
    base = sum(floor((p[j] + q[j]) * omega) for j in range(n))
    best = 0
    for sigma in permutations(range(n)):
        s = sum(floor((p[j] + q[sigma[j]]) * omega) for j in range(n))
        if s - base > best:
            best = s - base
    return best


@dataclass(frozen=True)
class FloorGainProfile:
    """The step function omega -> mu(omega) on [0, 1): breakpoints and values."""

    breakpoints: tuple[Fraction, ...]  # u_1 = 0 < u_2 < ... < u_r; interval ends at 1
    values: tuple[int, ...]            # mu on [u_i, u_{i+1})

    def segments(self) -> list[tuple[Fraction, Fraction, int]]:
        ends = list(self.breakpoints[1:]) + [Fraction(1)]
        return [(a, b, v) for a, b, v in zip(self.breakpoints, ends, self.values)]

    def value_at(self, omega: Fraction) -> int:
        v = 0
        for a, b, val in self.segments():
            if a <= omega < b:
                return val
        raise ParamError("omega outside [0, 1)")

    def to_json(self) -> str:
        return json.dumps(
            [{"from": f"{a.numerator}/{a.denominator}",
              "to": f"{b.numerator}/{b.denominator}",
              "mu": v} for a, b, v in self.segments()],
            indent=2)

    @staticmethod
    def from_json(text: str) -> "FloorGainProfile":
        rows = json.loads(text)
        return FloorGainProfile(
            tuple(Fraction(r["from"]) for r in rows),
            tuple(int(r["mu"]) for r in rows))


def floor_gain_profile(params: ParamSet) -> FloorGainProfile:
    """Evaluate mu at every candidate breakpoint c/(p_i + q_j) and merge runs.

    The floors can only jump at fractions whose denominator is a cross sum,
    so the candidate set is complete by construction.
    """
    cands = {Fraction(0)}
    for s in set(p + q for p in params.p for q in params.q):
        for c in range(1, s):
            cands.add(Fraction(c, s))
    pts = sorted(cands)
    bps: list[Fraction] = []
    vals: list[int] = []
    for x in pts:
        v = floor_gain(params, x)
        if not vals or vals[-1] != v:
            bps.append(x)
            vals.append(v)
    return FloorGainProfile(tuple(bps), tuple(vals))


# ---------------------------------------------------------------------------
# the divisor Delta_t and its growth rate
# ---------------------------------------------------------------------------

def guaranteed_divisor(params: ParamSet, t: int) -> int:
    """Delta_t = prod s^mu({t/s}) over primes s with s^2 > N_1 t.

    Primes above N_1 t contribute nothing: there {t/s} = t/s < 1/N_1, below
    the smallest breakpoint, so the product is finite.
    """
    if t < 1:
        raise ParamError("t must be >= 1")
    n1t = exponent_profile(params).cross_sums[0] * t
    out = 1
    for s in primes_in_range(1, n1t):
        if s * s <= n1t:
            continue
        gain = floor_gain(params, Fraction(t % s, s))
        if gain:
            out *= s**gain
    return out


def log_guaranteed_divisor(params: ParamSet, t: int) -> float:
    """log Delta_t as a float, without forming the big integer."""
    from math import log
    n1t = exponent_profile(params).cross_sums[0] * t
    total = 0.0
    for s in primes_in_range(1, n1t):
        if s * s <= n1t:
            continue
        gain = floor_gain(params, Fraction(t % s, s))
        if gain:
            total += gain * log(s)
    return total


# ---------------------------------------------------------------------------
# digamma and the limit constant
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()


def _bernoulli(m: int) -> Fraction:
    """B_m (B_1 = -1/2 convention), cached, by the defining recurrence."""
    from math import comb
    with _BERNOULLI_LOCK:  # cache extension must stay index-aligned
        while len(_BERNOULLI) <= m:
            k = len(_BERNOULLI)
            acc = Fraction(0)
            for i in range(k):
                acc += comb(k + 1, i) * _BERNOULLI[i]
            _BERNOULLI.append(-acc / (k + 1))
        return _BERNOULLI[m]


def digamma(x: Fraction, precision: int) -> mp.mpf:
    """psi(x) for rational x > 0 to `precision` bits.

    Shifts the argument into the asymptotic regime with the exact recurrence
    psi(x) = psi(x + k) - sum 1/(x + i), then sums the Euler-Maclaurin tail
    log x - 1/(2x) - sum B_{2j} / (2j x^{2j}) until the next term drops below
    the target, which bounds the truncation error for real arguments.  The
    smallest reachable term is about e^(-2 pi X) at shift target X, so X is
    sized with a margin over work * ln2 / (2 pi); if rounding still lets the
    terms bottom out early, the shift is enlarged and the sum restarted.
    """
    x = Fraction(x)
    if x <= 0:
        raise ParamError("digamma requires x > 0")
    work = precision + 48
    target = max(16, int(work * 0.13) + 2)
    for _ in range(4):
        shift = max(0, target - int(x))
        correction = Fraction(0)
        for i in range(shift):
            correction += Fraction(1) / (x + i)
        xs = x + shift
        with mp.workprec(work):
            xf = mp.mpf(xs.numerator) / xs.denominator
            result = mp.log(xf) - 1 / (2 * xf)
            x2 = xf * xf
            xpow = x2
            j = 1
            eps = mp.mpf(2) ** (-work)
            converged = False
            prev = mp.mpf("inf")
            while True:
                b = _bernoulli(2 * j)
                term = (mp.mpf(b.numerator) / b.denominator) / (2 * j * xpow)
                result -= term
                if abs(term) < eps:
                    converged = True
                    break
                if abs(term) > prev:
                    break  # divergent tail reached before the threshold
                prev = abs(term)
                j += 1
                xpow *= x2
            if converged:
                result -= mp.mpf(correction.numerator) / correction.denominator
                return +result
        target *= 2
    raise InternalCheckError("digamma series failed to converge at any shift")


def divisor_rate(params: ParamSet, precision: int = 192,
                 profile: Optional[FloorGainProfile] = None) -> mp.mpf:
    """The limit of (1/t) log Delta_t: sum mu(u) (psi(u') - psi(u)) over the
    profile's steps, with u' the right endpoint (1 for the last one)."""
    if profile is None:
        profile = floor_gain_profile(params)
    work = precision + 16
    with mp.workprec(work):
        total = mp.mpf(0)
        for a, b, v in profile.segments():
            if v:
                total += v * (digamma(b, work) - digamma(a, work))
        return +total


# ---------------------------------------------------------------------------
# integrality checks
# ---------------------------------------------------------------------------

def strong_integrality_check(params: ParamSet, t: int,
                             transforms: Sequence[DensePoly]) -> bool:
    """Delta_t^{-1} d_{N_1 t} ... d_{N_m t} T^m(L) has integer coefficients.

    `transforms` is the list [T(L), ..., T^m(L)] at scale t; only the last
    entry is checked.  Returns False only on a violation of the guarantee,
    which would mean a bug.
    """
    if not transforms:
        return True
    m = len(transforms)
    prof = exponent_profile(params)
    mult = 1
    for j in range(1, m + 1):
        mult *= lcm_upto(prof.lcm_index(j, t))
    delta = guaranteed_divisor(params, t)
    top = transforms[-1]
    for c in top.coeffs:
        scaled = c * mult
        if scaled.denominator != 1:
            return False
        if scaled.numerator % delta != 0:
            return False
    return True
