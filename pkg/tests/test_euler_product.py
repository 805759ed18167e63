"""Accelerated Euler products: closed forms, self-consistency, determinism.

Expected values are closed forms derivable by hand (the r=1 local factor
telescopes to 1; the r=2 inner series sums to (1+x)/(1-x)^3, collapsing the
local factor to 1-p^-2 and the product to the inverse zeta value at 2) plus
self-consistency between cutoffs measured against the reported estimate.
"""

import mpmath
import pytest

from zetagap.euler_product import (
    EulerProductResult,
    a_const,
    completion_exponent,
    cubic_log_coefficient,
    local_factor,
    sieve_primes,
)


class TestSieve:
    def test_small_primes(self):
        assert sieve_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_prime_counting_checkpoint(self):
        assert len(sieve_primes(10**4)) == 1229

    def test_degenerate_limits(self):
        assert sieve_primes(1) == []
        assert sieve_primes(2) == [2]


class TestCompletionConstants:
    def test_quadratic_exponent_values(self):
        # (r^4 + r^2)/2 - (r(r+1)/2)^2 by hand
        assert [completion_exponent(r) for r in (1, 2, 3, 4)] == [0, 1, 9, 36]

    def test_cubic_coefficient_values(self):
        # b3 - r^2 b2 + (r^6 - r^2)/3 by hand; vanishing at r = 1, 2 is what
        # makes those two products collapse in closed form
        assert [cubic_log_coefficient(r) for r in (1, 2, 3, 4)] == [0, 0, 16, 160]


class TestLocalFactor:
    def test_positive_and_approaching_one(self):
        gaps = []
        for p in (101, 1009, 10007):
            f = local_factor(3, p)
            assert f > 0
            gaps.append(abs(1 - f))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_r1_telescopes_to_one(self):
        with mpmath.workdps(50):
            assert abs(1 - local_factor(1, 101)) < mpmath.mpf("1e-45")

    def test_r2_completion_is_exact(self):
        with mpmath.workdps(50):
            assert abs(1 - local_factor(2, 101)) < mpmath.mpf("1e-45")


class TestAConst:
    def test_r1_is_exactly_one(self):
        assert a_const(1, 100).value == 1
        assert a_const(1, 10**4).value == 1

    def test_r2_matches_inverse_zeta_two(self):
        result = a_const(2, 10**4)
        with mpmath.workdps(60):
            assert abs(result.value - 6 / mpmath.pi**2) < mpmath.mpf("1e-40")

    def test_result_shape(self):
        result = a_const(3, 1000)
        assert isinstance(result, EulerProductResult)
        assert result.prime_cutoff == 1000
        assert result.value > 0
        assert result.tail_estimate > 0

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_cutoff_self_consistency(self, r):
        coarse = a_const(r, 10**3)
        fine = a_const(r, 10**4)
        assert abs(fine.value - coarse.value) <= coarse.tail_estimate

    def test_jobs_do_not_change_bits(self):
        lone = a_const(3, 10**5, jobs=1)
        multi = a_const(3, 10**5, jobs=3)
        assert lone.value == multi.value
        assert lone.tail_estimate == multi.tail_estimate

    def test_deterministic_across_calls(self):
        assert a_const(2, 2000) == a_const(2, 2000)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(r=0, cutoff=1000), dict(r=2, cutoff=99), dict(r=2, cutoff=1000, precision=0),
         dict(r=2, cutoff=1000, jobs=0)],
    )
    def test_rejects_bad_inputs(self, kwargs):
        with pytest.raises(ValueError):
            a_const(**kwargs)
