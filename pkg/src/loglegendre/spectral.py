"""Characteristic roots of the annihilating recurrence and growth rates.

The scaled polynomial sequence satisfies a fixed-order linear recurrence
whose limiting characteristic roots are the values

    v_h = prod_j (y_h - q_j)^{q_j} (y_h + p_j)^{p_j} / (p_j + q_j)^{p_j+q_j},

where the y_h solve zeta prod(y + p_j) = (zeta - 1) prod(y - q_j).  Growth
rates of solution sequences are read off with a windowed-max slope fit, and
for small instances an annihilating coefficient vector is found by exact
linear algebra over the rationals, witnessing the recurrence directly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .errors import HypothesisError, InternalCheckError, ParamError, PrecisionError
from .exact import DensePoly
from .legendre import ParamSet, _legendre_scaled


# ---------------------------------------------------------------------------
# characteristic polynomial and roots
# ---------------------------------------------------------------------------

def characteristic_polynomial(params: ParamSet) -> DensePoly:
    """zeta prod(y + p_j) - (zeta - 1) prod(y - q_j), monic of degree n in y."""
    zeta = params.z

    def expand(roots_negated: Sequence[Fraction]) -> list[Fraction]:
        cs = [Fraction(1)]
        for r in roots_negated:
            cs = [Fraction(0)] + cs
            for i in range(len(cs) - 1):
                cs[i] += r * cs[i + 1]
        return cs

    A = expand([Fraction(p) for p in params.p])
    B = expand([Fraction(-q) for q in params.q])
    coeffs = [zeta * a - (zeta - 1) * b for a, b in zip(A, B)]
    if coeffs[-1] != 1:
        raise InternalCheckError("characteristic polynomial is not monic")
    return DensePoly(coeffs)


@dataclass(frozen=True)
class SpectralData:
    """Roots y_h and values v_h, ordered by descending |v| (ties by argument)."""

    roots: tuple          # mpc roots y_h
    values: tuple         # mpc values v_h (empty until char_values fills them)
    log_abs_values: tuple  # mpf log|v_h|
    log_v_max: Optional[mp.mpf]      # log V = log max|v_h|
    log_v_capped: Optional[mp.mpf]   # log W = log max{|v_h| : |v_h| <= threshold}
    log_threshold: Optional[mp.mpf]  # log of the admissible-size threshold
    precision: int

    def to_json(self) -> str:
        dps = max(6, int(self.precision * 0.3010)) + 2

        def c2s(c):
            return {"re": mp.nstr(mp.re(c), dps), "im": mp.nstr(mp.im(c), dps)}

        payload = {
            "precision_bits": self.precision,
            "roots": [c2s(y) for y in self.roots],
            "values": [c2s(v) for v in self.values],
            "log_abs_values": [mp.nstr(x, dps) for x in self.log_abs_values],
            "log_v_max": mp.nstr(self.log_v_max, dps) if self.log_v_max is not None else None,
            "log_v_capped": mp.nstr(self.log_v_capped, dps) if self.log_v_capped is not None else None,
            "log_threshold": mp.nstr(self.log_threshold, dps) if self.log_threshold is not None else None,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _char_value_at(params: ParamSet, y, work: int):
    with mp.workprec(work):
        v = mp.mpf(1)
        for p, q in params.pairs():
            v = v * (y - q) ** q * (y + p) ** p
            v = v / mp.mpf((p + q) ** (p + q))
        return +v


def _aberth_roots(coeffs_frac: Sequence[Fraction], precision: int,
                  max_rounds: int = 400):
    """All complex roots of a monic exact-coefficient polynomial.

    Simultaneous Aberth iteration at precision + guard bits, deterministic
    starting points on a circle, run to a fixed-point tolerance of
    2^-(precision + 24).
    """
    n = len(coeffs_frac) - 1
    work = precision + 64
    with mp.workprec(work):
        cs = [mp.mpf(c.numerator) / c.denominator for c in coeffs_frac]

        def poly_and_deriv(x):
            acc = mp.mpc(0)
            dacc = mp.mpc(0)
            for c in reversed(cs):
                dacc = dacc * x + acc
                acc = acc * x + c
            return acc, dacc

        radius = 1 + max(abs(c) for c in cs[:-1]) if n else mp.mpf(1)
        roots = [radius * mp.exp(mp.mpc(0, 2 * mp.pi * k / n + mp.mpf(2) / 5))
                 for k in range(n)]
        tol = mp.mpf(2) ** (-(precision + 24))
        for rnd in range(max_rounds):
            biggest = mp.mpf(0)
            new = list(roots)
            for i in range(n):
                pv, dv = poly_and_deriv(roots[i])
                if pv == 0:
                    continue
                if dv == 0:
                    new[i] = roots[i] * (1 + tol) + tol  # nudge off a critical point
                    biggest = max(biggest, mp.mpf(1))
                    continue
                newton = pv / dv
                s = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (roots[i] - roots[j])
                corr = newton / (1 - newton * s)
                new[i] = roots[i] - corr
                biggest = max(biggest, abs(corr) / max(mp.mpf(1), abs(new[i])))
            roots = new
            if biggest < tol:
                break
        else:
            raise PrecisionError(
                f"root refinement did not converge (last step {mp.nstr(biggest, 8)})")
        return [+r for r in roots]


def characteristic_roots(params: ParamSet, precision: int = 512) -> SpectralData:
    """All n roots, refined together, ordered by descending |v_h|."""
    poly = characteristic_polynomial(params)
    roots = _aberth_roots(list(map(Fraction, poly.coeffs)), precision)
    work = precision + 64
    with mp.workprec(work):
        # deterministic ordering by the companion values
        decorated = []
        for y in roots:
            v = _char_value_at(params, y, work)
            decorated.append((y, v))
        decorated.sort(key=lambda yv: (-abs(yv[1]), mp.arg(yv[1])))
        roots = tuple(+y for y, _ in decorated)
        sep = min((abs(a - b) for i, a in enumerate(roots)
                   for b in roots[i + 1:]), default=mp.mpf("inf"))
        if sep < mp.mpf(2) ** (-(precision // 4)):
            warnings.warn("nearly multiple characteristic roots; results may lose accuracy")
    return SpectralData(roots=roots, values=(), log_abs_values=(),
                        log_v_max=None, log_v_capped=None,
                        log_threshold=None, precision=precision)


def _log_threshold(params: ParamSet, work: int) -> mp.mpf:
    """log of p1^p1 q1^q1 M^M / ((p1+q1)^(2(p1+q1)) prod_{l>=2} (pl+ql)^(pl+ql))."""
    p1, q1 = params.p[0], params.q[0]
    M = params.total_degree
    with mp.workprec(work):
        tot = p1 * mp.log(p1) + M * mp.log(M)
        if q1:
            tot += q1 * mp.log(q1)
        tot -= 2 * (p1 + q1) * mp.log(p1 + q1)
        for p, q in params.pairs()[1:]:
            tot -= (p + q) * mp.log(p + q)
        return +tot


def char_values(params: ParamSet, spectral: SpectralData) -> SpectralData:
    """Fill in v_h, V, W and the threshold; raises if the setup degenerates."""
    precision = spectral.precision
    work = precision + 64
    with mp.workprec(work):
        values = []
        for y in spectral.roots:
            v = _char_value_at(params, y, work)
            # legitimate values can be exponentially small; only a value that
            # is zero at working precision marks a degenerate root collision
            if v == 0 or abs(v) < mp.mpf(2) ** (-(precision - 64)):
                raise HypothesisError(
                    "a characteristic value vanishes (root collides with some q_j)")
            values.append(v)
        logs = [mp.log(abs(v)) for v in values]
        log_thr = _log_threshold(params, work)
        slack = mp.mpf(2) ** (-(precision // 4))
        if any(abs(lg - log_thr) < slack for lg in logs):
            # a value sits on the threshold; re-run everything sharper
            if precision > 1 << 20:
                raise PrecisionError("threshold comparison undecidable at sane precision")
            sharper = characteristic_roots(params, precision * 2)
            return char_values(params, sharper)
        below = [lg for lg in logs if lg <= log_thr]
        if not below:
            raise HypothesisError("no characteristic value below the size threshold")
        return SpectralData(
            roots=spectral.roots,
            values=tuple(+v for v in values),
            log_abs_values=tuple(+lg for lg in logs),
            log_v_max=+max(logs),
            log_v_capped=+max(below),
            log_threshold=+log_thr,
            precision=precision,
        )


def spectral_data(params: ParamSet, precision: int = 512) -> SpectralData:
    return char_values(params, characteristic_roots(params, precision))


# ---------------------------------------------------------------------------
# growth rate of a sequence (windowed max + slope fit)
# ---------------------------------------------------------------------------

def windowed_growth_rate(values: Sequence, window: int, t_start: int = 1) -> float:
    """Estimate lim (1/t) log max(|f(t)|, ..., |f(t+window-1)|).

    Takes |f(t)| values for consecutive t, forms the running window maximum,
    and fits a least-squares line to its log over the upper half of the
    range; the slope is the estimate.
    """
    if window < 1:
        raise ParamError("window must be >= 1")
    mags = [abs(v) for v in values]
    if len(mags) < window + 3:
        raise ParamError("need at least window + 3 values")
    if all(v == 0 for v in mags):
        raise ParamError("all-zero sequence has no growth rate")
    logs = []
    for i in range(len(mags) - window + 1):
        m = max(mags[i : i + window])
        if m == 0:
            raise ParamError("window maximum vanished; sequence is degenerate")
        logs.append(float(mp.log(m)))
    ts = list(range(t_start, t_start + len(logs)))
    half = len(logs) // 2
    xs, ys = ts[half:], logs[half:]
    k = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = k * sxx - sx * sx
    if denom == 0:
        raise ParamError("degenerate fit range")
    return (k * sxy - sx * sy) / denom


# ---------------------------------------------------------------------------
# per-scale recurrence witness by exact elimination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceWitness:
    """Coefficient polynomials A_0..A_n with sum A_l * L^(t+l) = 0."""

    t: int
    coefficients: tuple[DensePoly, ...]

    def is_trivial(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)


def recurrence_witness(params: ParamSet, t: int,
                       max_columns: int = 4000,
                       max_rows: int = 2000) -> Optional[RecurrenceWitness]:
    """Find A_0..A_n, deg A_l <= L + M(n-l), annihilating the scales t..t+n.

    L is the smallest integer above M n (n-1)/2 - n.  Columns z^i * P_{t+l}
    are reduced incrementally over exact rationals; the first column that
    reduces to zero yields the witness, which is verified exactly before
    being returned.  Returns None when no dependency exists in the allowed
    degree window.
    """
    if t < 0:
        raise ParamError("t must be >= 0")
    n = params.n
    M = params.total_degree
    Lbound = M * n * (n - 1) // 2 - n + 1
    rows = Lbound + M * (t + n) + 1
    total_cols = sum(Lbound + M * (n - l) + 1 for l in range(n + 1))
    if total_cols > max_columns or rows > max_rows:
        raise ParamError("instance too large for exact elimination")
    scaled = []
    for l in range(n + 1):
        s = t + l
        scaled.append(_legendre_scaled(params.pairs(), s) if s >= 1 else [1])

    reduced: list[list[Fraction]] = []
    combos: list[dict] = []
    pivots: list[tuple[int, int]] = []
    for l in range(n + 1):
        for i in range(Lbound + M * (n - l) + 1):
            vec = [Fraction(0)] * rows
            for k, c in enumerate(scaled[l]):
                vec[i + k] = Fraction(c)
            combo = {(l, i): Fraction(1)}
            for pr, idx in pivots:
                if vec[pr]:
                    f = vec[pr] / reduced[idx][pr]
                    col = reduced[idx]
                    for r in range(rows):
                        if col[r]:
                            vec[r] -= f * col[r]
                    for key, val in combos[idx].items():
                        combo[key] = combo.get(key, Fraction(0)) - f * val
            first = next((r for r in range(rows) if vec[r]), None)
            if first is None:
                witness = _assemble_witness(params, t, combo, n, Lbound, M)
                _verify_witness(scaled, witness, rows)
                return witness
            reduced.append(vec)
            combos.append(combo)
            pivots.append((first, len(reduced) - 1))
    return None


def _assemble_witness(params, t, combo, n, Lbound, M) -> RecurrenceWitness:
    polys = []
    for l in range(n + 1):
        cs = [Fraction(0)] * (Lbound + M * (n - l) + 1)
        for (ll, i), val in combo.items():
            if ll == l:
                cs[i] = val
        polys.append(DensePoly(cs))
    return RecurrenceWitness(t=t, coefficients=tuple(polys))


def _verify_witness(scaled: list[list[int]], witness: RecurrenceWitness, rows: int):
    acc = [Fraction(0)] * rows
    nonzero = False
    for l, poly in enumerate(witness.coefficients):
        if poly.is_zero():
            continue
        nonzero = True
        for i, a in enumerate(poly.coeffs):
            if a:
                for k, c in enumerate(scaled[l]):
                    if c:
                        acc[i + k] += a * c
    if not nonzero:
        raise InternalCheckError("assembled witness is the zero vector")
    if any(acc):
        raise InternalCheckError("witness does not annihilate exactly")
