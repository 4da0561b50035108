import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from loglegendre.corpus import oracle_corpus
from loglegendre.divisors import (
    digamma,
    divisor_rate,
    exponent_profile,
    floor_gain,
    floor_gain_profile,
    FloorGainProfile,
    guaranteed_divisor,
    log_guaranteed_divisor,
    strong_integrality_check,
)
from loglegendre.errors import ParamError
from loglegendre.exact import DensePoly, log_lcm_upto
from loglegendre.legendre import (
    ParamSet,
    build_record,
    trivial_clearing_multiplier,
)

# frozen by an independent per-prime run of the defining product
EXAMPLE1_DIVISOR_T12 = 18579448222667298067513


class TestExponentProfile:
    def test_example1(self, example1):
        prof = exponent_profile(example1)
        assert prof.cross_sums == (7, 6, 6, 5, 5, 5, 4, 4, 3)
        assert prof.lcm_exponents[0] == 7
        assert prof.diagonal_sums == (7, 5, 3)

    def test_example2(self, example2):
        prof = exponent_profile(example2)
        assert prof.lcm_exponents[0] == 10
        assert prof.lcm_exponents[1] == 9

    def test_n1(self):
        prof = exponent_profile(ParamSet(p=(1,), q=(0,), z=Fraction(-1)))
        assert prof.cross_sums == (1,)
        assert prof.lcm_exponents == (Fraction(1),)
        assert prof.diagonal_sums == (1,)

    def test_lcm_index_floor(self, example2):
        prof = exponent_profile(example2)
        # N_2 = max(9, 10/2) = 9, so index at t=3 is 27
        assert prof.lcm_index(2, 3) == 27
        # fractional branch: max(K_3 t, floor(K_1 t / 3))
        assert prof.lcm_index(3, 1) == max(prof.cross_sums[2], 10 // 3)


class TestFloorGain:
    def test_example1_values(self, example1):
        assert floor_gain(example1, Fraction(1, 2)) == 1
        assert floor_gain(example1, Fraction(0)) == 0

    def test_example2_value(self, example2):
        assert floor_gain(example2, Fraction(1, 7)) == 2

    def test_range_validation(self, example1):
        with pytest.raises(ParamError):
            floor_gain(example1, Fraction(1))

    def test_nonnegative(self, example1):
        rng = random.Random(30)
        for _ in range(50):
            omega = Fraction(rng.randint(0, 99), 100)
            assert floor_gain(example1, omega) >= 0


class TestProfile:
    def test_example1_table(self, example1):
        prof = floor_gain_profile(example1)
        nonzero = [(a, b, v) for a, b, v in prof.segments() if v]
        assert nonzero == [
            (Fraction(1, 6), Fraction(3, 7), 1),
            (Fraction(1, 2), Fraction(5, 7), 1),
            (Fraction(3, 4), Fraction(6, 7), 1),
        ]

    def test_example2_table(self, example2):
        prof = floor_gain_profile(example2)
        two = [(a, b) for a, b, v in prof.segments() if v == 2]
        one = [(a, b) for a, b, v in prof.segments() if v == 1]
        F = Fraction
        assert two == [(F(1, 7), F(1, 6)), (F(2, 9), F(1, 4)), (F(2, 7), F(3, 10)),
                       (F(3, 7), F(1, 2)), (F(4, 7), F(3, 5)), (F(5, 7), F(3, 4)),
                       (F(6, 7), F(7, 8))]
        assert one == [(F(1, 9), F(1, 7)), (F(1, 6), F(2, 9)), (F(1, 4), F(2, 7)),
                       (F(3, 10), F(3, 7)), (F(5, 9), F(4, 7)), (F(3, 5), F(5, 7)),
                       (F(3, 4), F(6, 7)), (F(7, 8), F(9, 10))]

    def test_n1_identically_zero(self):
        prof = floor_gain_profile(ParamSet(p=(3,), q=(2,), z=Fraction(-1)))
        assert prof.values == (0,)
        assert prof.breakpoints == (Fraction(0),)

    def test_profile_agrees_with_direct_evaluation(self, example1):
        prof = floor_gain_profile(example1)
        rng = random.Random(31)
        for _ in range(60):
            omega = Fraction(rng.randint(0, 419), 420)
            assert prof.value_at(omega) == floor_gain(example1, omega)

    def test_json_round_trip(self, example1):
        prof = floor_gain_profile(example1)
        again = FloorGainProfile.from_json(prof.to_json())
        assert again == prof


class TestGuaranteedDivisor:
    def test_frozen_regression(self, example1):
        assert guaranteed_divisor(example1, 12) == EXAMPLE1_DIVISOR_T12

    def test_against_per_prime_oracle(self, example1):
        # independent recomputation straight from the definition
        from loglegendre.exact import primes_in_range
        t = 9
        n1t = 7 * t
        want = 1
        for s in primes_in_range(1, n1t):
            if s * s <= n1t:
                continue
            want *= s ** floor_gain(example1, Fraction(t % s, s))
        assert guaranteed_divisor(example1, t) == want

    def test_n1_trivial(self):
        params = ParamSet(p=(2,), q=(1,), z=Fraction(-1))
        for t in (1, 5, 9):
            assert guaranteed_divisor(params, t) == 1

    def test_log_variant(self, example1):
        d = guaranteed_divisor(example1, 12)
        assert log_guaranteed_divisor(example1, 12) == pytest.approx(math.log(d), rel=1e-12)


class TestDigamma:
    def test_recurrence(self):
        for x in (Fraction(1, 3), Fraction(2, 7), Fraction(5, 2), Fraction(9)):
            lhs = digamma(x + 1, 128) - digamma(x, 128)
            want = mp.mpf(x.denominator) / x.numerator
            assert abs(lhs - 1 / (mp.mpf(x.numerator) / x.denominator)) < mp.mpf(2) ** -110

    def test_at_one(self):
        # negated Euler-Mascheroni constant
        val = digamma(Fraction(1), 128)
        with mp.workprec(200):
            assert abs(val - mp.mpf("-0.57721566490153286061")) < mp.mpf(2) ** -60

    def test_half_argument_relation(self):
        lhs = digamma(Fraction(1, 2), 160)
        with mp.workprec(220):
            rhs = digamma(Fraction(1), 160) - 2 * mp.log(2)
            assert abs(lhs - rhs) < mp.mpf(2) ** -140

    def test_against_mpmath(self):
        rng = random.Random(32)
        with mp.workprec(300):
            for _ in range(20):
                x = Fraction(rng.randint(1, 60), rng.randint(1, 60))
                want = mp.digamma(mp.mpf(x.numerator) / x.denominator)
                got = digamma(x, 256)
                assert abs(got - want) < mp.mpf(2) ** -240

    def test_domain(self):
        with pytest.raises(ParamError):
            digamma(Fraction(0), 64)


class TestDivisorRate:
    def test_example1(self, example1):
        val = divisor_rate(example1, 192)
        assert abs(val - mp.mpf("4.995102335817")) < 1e-11

    def test_example2(self, example2):
        val = divisor_rate(example2, 192)
        assert abs(val - mp.mpf("10.792110594854")) < 1e-11

    def test_zero_profile(self):
        params = ParamSet(p=(4,), q=(2,), z=Fraction(-1))
        assert divisor_rate(params, 128) == 0

    def test_convergence_trend(self, example1):
        delta = float(divisor_rate(example1, 128))
        gaps = [abs(log_guaranteed_divisor(example1, t) / t - delta)
                for t in (32, 64, 128)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert all(log_guaranteed_divisor(example1, t) / t < delta
                   for t in (32, 64, 128))


class TestIntegrality:
    def test_trivial_multiplier_example1(self, example1):
        # H = (7, 5, 3), m = 1: the multiplier is lcm(1..7t)
        from loglegendre.exact import lcm_upto
        assert trivial_clearing_multiplier(example1, 1) == lcm_upto(7)
        assert trivial_clearing_multiplier(example1, 3) == lcm_upto(21)

    def test_strong_check_small_scales(self, example1, example2):
        for t in (1, 2, 3):
            rec = build_record(example1, t)
            assert strong_integrality_check(example1, t, rec.transforms)
        rec = build_record(example2, 1)
        assert strong_integrality_check(example2, 1, rec.transforms)

    def test_strong_check_random_corpus(self):
        for params, t in oracle_corpus(seed=103, count=12, max_weight=24, with_m=True):
            rec = build_record(params, t)
            assert strong_integrality_check(params, t, rec.transforms), \
                f"violation at p={params.p} q={params.q} m={params.m} t={t}"

    def test_empty_transforms_vacuous(self, example1):
        assert strong_integrality_check(example1, 1, [])

    def test_corruption_detected(self, example1):
        rec = build_record(example1, 2)
        top = rec.transforms[-1]
        corrupted = DensePoly(
            list(top.coeffs[:-1]) + [top.coeffs[-1] + Fraction(1, 10**40)])
        assert not strong_integrality_check(example1, 2, [corrupted])


class TestLcmGrowthSanity:
    def test_lcm_exponent_growth(self):
        # (1/t) log lcm(1..N t) is near N for large t
        t = 10**4
        n = 7
        rate = log_lcm_upto(n * t) / t
        assert abs(rate - n) / n < 0.05
