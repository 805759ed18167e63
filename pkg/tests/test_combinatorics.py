"""Combinatorial constants: factorials, Beta values, omega weights, splits.

Expected values are hand arithmetic on small arguments (shown inline) or
exact identities over exhaustive small ranges; everything here is rational
equality with zero tolerance.
"""

import math
import random

import pytest
from gmpy2 import mpq

from zetagap.combinatorics import (
    INDEX_SPLITS,
    b_const,
    beta_int,
    binom,
    c_const,
    delta,
    factorial,
    iter_split_pairs,
    omega,
)


class TestFactorialBinom:
    def test_factorial_matches_stdlib(self):
        rng = random.Random(911)
        for n in [0, 1, 2, 5, 30, 165] + [rng.randint(0, 400) for _ in range(10)]:
            assert factorial(n) == math.factorial(n)

    def test_factorial_rejects_negative(self):
        with pytest.raises(ValueError):
            factorial(-1)

    def test_binom_matches_stdlib_in_range(self):
        for n in range(12):
            for k in range(n + 1):
                assert binom(n, k) == math.comb(n, k)

    def test_binom_out_of_range_is_zero(self):
        assert binom(4, -1) == 0
        assert binom(4, 5) == 0

    def test_binom_rejects_negative_n(self):
        with pytest.raises(ValueError):
            binom(-2, 0)

    def test_pascal_identity(self):
        for n in range(1, 51):
            for k in range(n + 1):
                assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)


class TestBetaInt:
    def test_hand_values(self):
        # B(m,n) = (m-1)!(n-1)!/(m+n-1)!
        assert beta_int(1, 1) == 1
        assert beta_int(2, 2) == mpq(1, 6)
        assert beta_int(4, 5) == mpq(1, 280)  # 3!4!/8! = 144/40320

    def test_symmetry(self):
        for a in range(1, 51):
            for b in range(1, 51):
                assert beta_int(a, b) == beta_int(b, a)

    def test_contiguous_recurrence(self):
        # B(a,b) - B(a+1,b) = B(a,b+1), the identity behind the three-term
        # h-integral assembly
        for a in range(1, 51):
            for b in range(1, 51):
                assert beta_int(a, b) - beta_int(a + 1, b) == beta_int(a, b + 1)

    @pytest.mark.parametrize("bad", [(0, 1), (1, 0), (-3, 2)])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            beta_int(*bad)


class TestDeltaOmega:
    def test_delta(self):
        assert delta(0) == 1
        for j in (1, 2, 7):
            assert delta(j) == -1

    def test_omega_base_case_hand_values(self):
        # i2pp = 0: omega = (-1)^(n+1) C(r, n+2) at r = 2
        assert omega(2, 0, -2) == -1
        assert omega(2, 0, -1) == 2
        assert omega(2, 0, 0) == -1

    def test_omega_at_lowest_index_is_minus_one(self):
        # the n = -2 sum collapses to its single j' = -2 term for every case
        for r in range(1, 7):
            for i2pp in (0, 1, 2):
                assert omega(r, i2pp, -2) == -1

    def test_omega_convolution_hand_values(self):
        # r = 2, i2pp = 1, n = -1: j' = -2 gives -C(2,0) Delta(1) = 1,
        # j' = -1 gives C(2,1) Delta(0) = 2
        assert omega(2, 1, -1) == 3
        # r = 2, i2pp = 1, n = 0: terms Delta(2) - 2 Delta(1) - Delta(0) = 1 - (-2)*...
        # j' = -2: -Delta(2) = 1; j' = -1: 2 Delta(1) = -2; j' = 0: -Delta(0) = -1
        assert omega(2, 1, 0) == -2
        # r = 2, i2pp = 2, n = 0 with conv(m) = sum Delta(j1)Delta(m-j1):
        # conv(2) = -1, conv(1) = -2, conv(0) = 1;
        # j' = -2: -conv(2) = 1; j' = -1: 2 conv(1) = -4; j' = 0: -conv(0) = -1
        assert omega(2, 2, 0) == -4

    def test_omega_vanishes_past_r_minus_two(self):
        # The literal case formulas vanish for n > r-2 whenever the r-th
        # finite difference can kill the summand: the double-Delta
        # convolution is linear in its argument only from 1 upward, so the
        # single exception is r = 1 with i2pp = 2, where the first
        # difference of that linear tail is the constant -1. The series
        # assembly never evaluates omega there (its inner sum stops at
        # min(r-2, j)), so the exception is unreachable from hat_k.
        for r in range(1, 7):
            for i2pp in (0, 1, 2):
                for n in range(r - 1, r + 7):
                    if r == 1 and i2pp == 2:
                        assert omega(r, i2pp, n) == -1
                    else:
                        assert omega(r, i2pp, n) == 0

    def test_omega_rejects_small_n(self):
        with pytest.raises(ValueError):
            omega(2, 0, -3)

    def test_omega_rejects_bad_i2pp(self):
        with pytest.raises(ValueError):
            omega(2, 3, 0)


class TestWeights:
    def test_b_const_hand_values(self):
        # b_r(i1p,i2p) = sum_tau C(i1p,tau) C(i2p,tau) tau! r^(i1p+i2p-2 tau)
        assert b_const(2, 0, 0) == 1
        assert b_const(2, 1, 1) == 5  # 4 + 1
        assert b_const(1, 2, 2) == 7  # 1 + 4 + 2

    def test_c_const_hand_values(self):
        # c_r = C(i1,i1p) C(i2,i2p) b_r / ((r^2+i1p+i2p-1)! (r+i1pp-1)! (r+i2pp-1)!)
        assert c_const(2, 0, 0, 0, 0) == mpq(1, 6)  # 1 / 3!
        assert c_const(2, 0, 0, 2, 0) == mpq(1, 36)  # 1 / (3! 3!)
        assert c_const(2, 1, 1, 1, 1) == mpq(1, 24)  # 2*2*5 / (5! 2! 2!)
        assert c_const(1, 0, 0, 0, 0) == 1
        assert c_const(1, 2, 2, 0, 0) == mpq(7, 24)  # b_1(2,2)=7 over 4!
    def test_c_const_rejects_invalid_split(self):
        with pytest.raises(ValueError):
            c_const(2, 1, 0, 0, 0)  # i1 = 1 is not an allowed index


class TestSplits:
    def test_index_splits_frozen(self):
        # enumeration order is a determinism contract relied on by the
        # series assembly and the optimizer tie-breaking
        assert INDEX_SPLITS == ((0, 0), (0, 2), (1, 1), (2, 0))

    def test_sixteen_ordered_pairs(self):
        pairs = list(iter_split_pairs())
        assert len(pairs) == 16
        assert pairs[0] == ((0, 0), (0, 0))
        assert pairs[-1] == ((2, 0), (2, 0))
        assert pairs == [(a, b) for a in INDEX_SPLITS for b in INDEX_SPLITS]
