"""Exact factorial, Beta and binomial machinery plus the combinatorial weights.

Everything here is integer or rational arithmetic with no rounding. The
factorial table grows on demand and is only ever appended to, so concurrent
readers are safe once the table covers the indices a computation needs; the
moment-integral layer touches factorials millions of times during a search, so
table lookup (rather than recomputation) matters.

The split weights b_const / c_const and the alternating weights delta / omega
are small closed-form sums; omega with an out-of-range binomial upper index
vanishes by the out-of-range-is-zero convention, which is exactly what makes
omega(r, i2pp, n) = 0 for n > r - 2.
"""

from __future__ import annotations

from math import comb

from gmpy2 import mpq, mpz

Rat = mpq

# All index splits (i_prime, i_dprime) with i_prime + i_dprime in {0, 2}.
# Enumeration order is part of the deterministic-evaluation contract.
INDEX_SPLITS: tuple[tuple[int, int], ...] = ((0, 0), (0, 2), (1, 1), (2, 0))

_FACTS: list[mpz] = [mpz(1)]


def factorial(n: int) -> mpz:
    """n! exactly, from a grow-on-demand table."""
    if n < 0:
        raise ValueError(f"factorial of negative {n}")
    while len(_FACTS) <= n:
        _FACTS.append(_FACTS[-1] * len(_FACTS))
    return _FACTS[n]


def binom(n: int, k: int) -> int:
    """C(n, k) with the out-of-range convention: 0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial with negative row {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def beta_int(m: int, n: int) -> Rat:
    """Beta function at positive integers: (m-1)! (n-1)! / (m+n-1)!."""
    if m <= 0 or n <= 0:
        raise ValueError(f"beta_int needs positive integers, got ({m}, {n})")
    return mpq(factorial(m - 1) * factorial(n - 1), factorial(m + n - 1))


def delta(j: int) -> int:
    """1 at j = 0, -1 for every j >= 1."""
    if j < 0:
        raise ValueError(f"delta needs j >= 0, got {j}")
    return 1 if j == 0 else -1


def _sign(exponent: int) -> int:
    return 1 if exponent % 2 == 0 else -1


def omega(r: int, i2pp: int, n: int) -> int:
    """The alternating weight attached to the k-family, for n >= -2.

    Three cases by i2pp in {0, 1, 2}: a single signed binomial, and its
    convolutions with one or two delta sequences. Vanishes for n > r - 2.
    """
    if r < 1:
        raise ValueError(f"omega needs r >= 1, got {r}")
    if n < -2:
        raise ValueError(f"omega needs n >= -2, got {n}")
    if i2pp == 0:
        return _sign(n + 1) * binom(r, n + 2)
    if i2pp not in (1, 2):
        raise ValueError(f"omega needs i2pp in {{0,1,2}}, got {i2pp}")
    total = 0
    for jp in range(-2, min(r - 2, n) + 1):
        weight = _sign(jp + 1) * binom(r, jp + 2)
        if weight == 0:
            continue
        s = n - jp  # >= 0 because jp <= n
        if i2pp == 1:
            total += weight * delta(s)
        else:
            conv = sum(delta(j1) * delta(s - j1) for j1 in range(s + 1))
            total += weight * conv
    return total


def b_const(r: int, i1p: int, i2p: int) -> int:
    """sum_tau C(i1p,tau) C(i2p,tau) tau! r^(i1p+i2p-2tau)."""
    if r < 1:
        raise ValueError(f"b_const needs r >= 1, got {r}")
    if i1p < 0 or i2p < 0:
        raise ValueError(f"b_const needs nonnegative indices, got ({i1p}, {i2p})")
    total = 0
    for tau in range(min(i1p, i2p) + 1):
        total += comb(i1p, tau) * comb(i2p, tau) * int(factorial(tau)) * r ** (i1p + i2p - 2 * tau)
    return total


def c_const(r: int, i1p: int, i2p: int, i1pp: int, i2pp: int) -> Rat:
    """The split weight C(i1,i1p) C(i2,i2p) b_r(i1p,i2p) over its factorial triple."""
    if r < 1:
        raise ValueError(f"c_const needs r >= 1, got {r}")
    if min(i1p, i2p, i1pp, i2pp) < 0:
        raise ValueError("c_const needs nonnegative split indices")
    i1 = i1p + i1pp
    i2 = i2p + i2pp
    if i1 not in (0, 2) or i2 not in (0, 2):
        raise ValueError(f"split sums must lie in {{0,2}}, got i1={i1}, i2={i2}")
    numerator = binom(i1, i1p) * binom(i2, i2p) * b_const(r, i1p, i2p)
    denominator = (
        factorial(r * r + i1p + i2p - 1)
        * factorial(r + i1pp - 1)
        * factorial(r + i2pp - 1)
    )
    return mpq(numerator, denominator)


def iter_split_pairs() -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
    """All 16 ((i1p,i1pp),(i2p,i2pp)) split pairs in canonical order."""
    return tuple((s1, s2) for s1 in INDEX_SPLITS for s2 in INDEX_SPLITS)
