import json
import random
from fractions import Fraction

import mpmath as mp
import pytest

from loglegendre.corpus import oracle_corpus
from loglegendre.errors import HypothesisError, ParamError
from loglegendre.exact import DensePoly
from loglegendre.legendre import ParamSet
from loglegendre.spectral import (
    SpectralData,
    char_values,
    characteristic_polynomial,
    characteristic_roots,
    recurrence_witness,
    spectral_data,
    windowed_growth_rate,
)


def poly(*cs):
    return DensePoly(cs)


class TestCharacteristicPolynomial:
    def test_example1_expansion(self, example1):
        # -(y+3)(y+4)(y+5) + 2 y (y-1)(y-2), built independently
        lhs = -(poly(3, 1) * poly(4, 1) * poly(5, 1)) + \
            2 * (poly(0, 1) * poly(-1, 1) * poly(-2, 1))
        assert characteristic_polynomial(example1) == lhs

    def test_linear_case(self):
        params = ParamSet(p=(1,), q=(0,), z=Fraction(-1))
        assert characteristic_polynomial(params) == poly(-1, 1)  # y - 1

    def test_always_monic(self):
        for params, _ in oracle_corpus(seed=40, count=20, max_weight=40):
            assert characteristic_polynomial(params).coeffs[-1] == 1


class TestRoots:
    def test_example1_values(self, example1):
        sd = characteristic_roots(example1, 512)
        with mp.workprec(600):
            want_real = mp.mpf("20.267669670594")
            want_re = mp.mpf("-1.133834835297")
            want_im = mp.mpf("1.294140012477")
            assert abs(sd.roots[0] - want_real) < 1e-9
            pair = sorted(sd.roots[1:], key=lambda y: float(mp.im(y)))
            assert abs(mp.re(pair[0]) - want_re) < 1e-9
            assert abs(mp.im(pair[0]) + want_im) < 1e-9
            assert abs(mp.re(pair[1]) - want_re) < 1e-9
            assert abs(mp.im(pair[1]) - want_im) < 1e-9

    def test_linear_case_exact(self):
        params = ParamSet(p=(1,), q=(0,), z=Fraction(-1))
        sd = characteristic_roots(params, 128)
        assert abs(sd.roots[0] - 1) < mp.mpf(2) ** -120

    def test_conjugation_closure(self, example2):
        sd = characteristic_roots(example2, 256)
        with mp.workprec(300):
            for y in sd.roots:
                if abs(mp.im(y)) > mp.mpf(2) ** -200:
                    assert any(abs(mp.conj(y) - y2) < mp.mpf(2) ** -200
                               for y2 in sd.roots)

    def test_vieta(self, example1, example2):
        for params in (example1, example2):
            cp = characteristic_polynomial(params)
            prec = 320
            sd = characteristic_roots(params, prec)
            with mp.workprec(prec + 64):
                n = params.n
                total = sum(sd.roots)
                prod = mp.mpf(1)
                for y in sd.roots:
                    prod *= y
                want_sum = -mp.mpf(Fraction(cp.coeffs[-2]).numerator) / \
                    Fraction(cp.coeffs[-2]).denominator
                c0 = Fraction(cp.coeffs[0])
                want_prod = (-1) ** n * mp.mpf(c0.numerator) / c0.denominator
                assert abs(total - want_sum) < mp.mpf(2) ** -(prec - 20)
                assert abs(prod - want_prod) < abs(want_prod) * mp.mpf(2) ** -(prec - 20)

    def test_residuals(self, example2):
        prec = 256
        cp = characteristic_polynomial(example2)
        sd = characteristic_roots(example2, prec)
        with mp.workprec(prec + 64):
            for y in sd.roots:
                acc = mp.mpc(0)
                for c in reversed(cp.coeffs):
                    cf = Fraction(c)
                    acc = acc * y + mp.mpf(cf.numerator) / cf.denominator
                bound = mp.mpf(2) ** (-(prec - 16)) * (1 + abs(y)) ** example2.n
                assert abs(acc) < bound

    def test_against_mpmath_polyroots(self, example1):
        cp = characteristic_polynomial(example1)
        with mp.workprec(200):
            cs = [mp.mpf(Fraction(c).numerator) / Fraction(c).denominator
                  for c in reversed(cp.coeffs)]
            other = mp.polyroots(cs, maxsteps=100, extraprec=100)
            sd = characteristic_roots(example1, 128)
            for y in sd.roots:
                assert min(abs(y - o) for o in other) < mp.mpf(2) ** -100


class TestCharValues:
    def test_example1_logs(self, example1):
        sd = spectral_data(example1, 512)
        assert abs(sd.log_abs_values[0] - mp.mpf("22.149699678920")) < 1e-9
        assert abs(sd.log_abs_values[1] - mp.mpf("-7.537440405644")) < 1e-9
        assert abs(sd.log_abs_values[2] - mp.mpf("-7.537440405644")) < 1e-9
        # the big value is excluded by the size threshold
        assert abs(sd.log_threshold - mp.mpf("13.1543")) < 1e-3
        assert abs(sd.log_v_max - sd.log_abs_values[0]) < 1e-20
        assert abs(sd.log_v_capped - sd.log_abs_values[1]) < 1e-20

    def test_example2_logs(self, example2):
        sd = spectral_data(example2, 512)
        assert abs(sd.log_abs_values[0] - mp.mpf("48.947490848559")) < 1e-9
        assert abs(sd.log_abs_values[1] - mp.mpf("-9.276132199490")) < 1e-9
        assert abs(sd.log_abs_values[3] - mp.mpf("-18.115257059384")) < 1e-9

    def test_degenerate_root_rejected(self, example1):
        fake = SpectralData(roots=(mp.mpc(2, 0),), values=(), log_abs_values=(),
                            log_v_max=None, log_v_capped=None,
                            log_threshold=None, precision=128)
        # y = q_2 = 2 makes (y - q_2)^(q_2) vanish
        with pytest.raises(HypothesisError):
            char_values(example1, fake)

    def test_no_value_below_threshold_rejected(self, example1):
        fake = SpectralData(roots=(mp.mpc(10**9, 0), mp.mpc(-10**9, 1)),
                            values=(), log_abs_values=(),
                            log_v_max=None, log_v_capped=None,
                            log_threshold=None, precision=128)
        with pytest.raises(HypothesisError):
            char_values(example1, fake)

    def test_json_serialization(self, example1):
        sd = spectral_data(example1, 192)
        payload = json.loads(sd.to_json())
        assert payload["precision_bits"] == 192
        assert len(payload["roots"]) == 3
        assert payload["log_v_max"].startswith("22.14969967892")


class TestWindowedGrowthRate:
    def test_geometric(self):
        vals = [mp.mpf(3) ** t for t in range(1, 40)]
        slope = windowed_growth_rate(vals, window=2)
        assert abs(slope - mp.log(3)) < 1e-9

    def test_decaying_geometric(self):
        vals = [mp.mpf(2) ** -t for t in range(1, 60)]
        slope = windowed_growth_rate(vals, window=3)
        assert abs(slope + mp.log(2)) < 1e-9

    def test_all_zero_rejected(self):
        with pytest.raises(ParamError):
            windowed_growth_rate([mp.mpf(0)] * 30, window=3)

    def test_too_short_rejected(self):
        with pytest.raises(ParamError):
            windowed_growth_rate([mp.mpf(1)] * 4, window=3)


class TestRecurrenceWitness:
    def test_small_instance_all_t(self):
        params = ParamSet(p=(1, 1), q=(0, 0), z=Fraction(-1), m=1)
        for t in range(0, 11):
            w = recurrence_witness(params, t)
            assert w is not None, f"no witness at t={t}"
            assert not w.is_trivial()

    def test_degree_bounds(self):
        params = ParamSet(p=(1, 1), q=(0, 0), z=Fraction(-1), m=1)
        n, M = 2, 4
        bound = M * n * (n - 1) // 2 - n + 1
        w = recurrence_witness(params, 4)
        for l, cp in enumerate(w.coefficients):
            if not cp.is_zero():
                assert cp.degree <= bound + M * (n - l)

    def test_example1_small_t(self, example1):
        w = recurrence_witness(example1, 1)
        assert w is not None and not w.is_trivial()

    def test_size_guard(self, example1):
        with pytest.raises(ParamError):
            recurrence_witness(example1, 500)
