"""Arithmetic-constant evaluation by accelerated truncated Euler products.

The constant for parameter r is the product over all primes of

    (1 - 1/p)^(r^2) * sum_{m>=0} C(r+m-1, m)^2 p^(-m).

The raw local factor is 1 + O(p^-2), so truncating at cutoff N leaves an
error of order 1/(N log N) — too slow for tight tolerances at practical
cutoffs. This module therefore multiplies each local factor by
(1 - p^-2)^(-g(r)), where the integer g(r) is chosen so the combined
logarithm is O(p^-3), and restores the global factor zeta(2)^(-g(r)) in
closed form. The completed product converges like 1/N^2; for r = 1 every
local factor telescopes to 1 and for r = 2 the completion is exact at every
prime, so both classical values come out to working precision at any cutoff.

The constant cancels between the numerator and denominator of the gap-ratio
functional, so nothing here feeds the series assembly; the module exists to
check the constants independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from multiprocessing import Pool

import mpmath
import numpy as np

_GUARD_DPS = 15
_CHUNK = 4096  # fixed chunk size: the reduction order never depends on jobs


@dataclass(frozen=True)
class EulerProductResult:
    """One accelerated product evaluation with its truncation estimate."""

    value: mpmath.mpf
    prime_cutoff: int
    tail_estimate: mpmath.mpf


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by a plain boolean sieve."""
    if limit < 2:
        return []
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].tolist()


def completion_exponent(r: int) -> int:
    """Exponent g with [x^2] log((1-x)^(r^2) S(x) (1-x^2)^(-g)) = 0.

    Writing S(x) = 1 + r^2 x + b2 x^2 + ..., the quadratic log coefficient of
    the raw factor is b2 - (r^4 + r^2)/2; multiplying by (1-x^2)^(-g) adds g.
    """
    b2 = (r * (r + 1) // 2) ** 2
    return (r**4 + r**2) // 2 - b2


def cubic_log_coefficient(r: int) -> int:
    """[x^3] of the completed local-factor logarithm (drives the tail rate)."""
    b2 = (r * (r + 1) // 2) ** 2
    b3 = comb(r + 2, 3) ** 2
    return b3 - r * r * b2 + (r**6 - r * r) // 3


@lru_cache(maxsize=None)
def _series_coefficients(r: int, count: int) -> tuple[int, ...]:
    return tuple(comb(r + m - 1, m) ** 2 for m in range(count))


def _local_factor(r: int, p: int, g: int, thresh: mpmath.mpf) -> mpmath.mpf:
    """Completed local factor (1-x)^(r^2-g) (1+x)^(-g) S(x) at x = 1/p."""
    one = mpmath.mpf(1)
    x = one / p
    coeffs = _series_coefficients(r, 64)
    s = mpmath.mpf(0)
    xpow = one
    m = 0
    while True:
        if m >= len(coeffs):
            coeffs = _series_coefficients(r, 2 * m)
        term = coeffs[m] * xpow
        s += term
        if term < thresh:
            break
        xpow *= x
        m += 1
    # (1-x^2)^(-g) = (1-x)^(-g) (1+x)^(-g), folded into the (1-x) power
    value = (1 - x) ** (r * r - g) * s
    if g:
        value /= (1 + x) ** g
    return value


def local_factor(r: int, p: int, precision: int = 50) -> mpmath.mpf:
    """The completed local factor at one prime, at the given precision."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    with mpmath.workdps(precision + _GUARD_DPS):
        thresh = mpmath.mpf(10) ** (-(precision + 10))
        value = _local_factor(r, p, completion_exponent(r), thresh)
    with mpmath.workdps(precision):
        return +value


def _chunk_product(args: tuple[int, int, int, list[int]]) -> tuple:
    """Product of completed local factors over one ordered prime chunk.

    Returns the raw mpf component tuple: exact to transport across process
    boundaries, independent of the receiving context's precision.
    """
    r, g, precision, primes = args
    with mpmath.workdps(precision + _GUARD_DPS):
        thresh = mpmath.mpf(10) ** (-(precision + 10))
        total = mpmath.mpf(1)
        for p in primes:
            total *= _local_factor(r, p, g, thresh)
    return total._mpf_


def a_const(r: int, cutoff: int, precision: int = 50, jobs: int = 1) -> EulerProductResult:
    """Accelerated Euler product for parameter r over primes <= cutoff.

    The reduction is chunked at a fixed size and combined in chunk order, so
    the result is bit-identical for every jobs value.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if cutoff < 100:
        raise ValueError(f"cutoff must be >= 100, got {cutoff}")
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    g = completion_exponent(r)
    primes = sieve_primes(cutoff)
    chunks = [
        (r, g, precision, primes[i : i + _CHUNK]) for i in range(0, len(primes), _CHUNK)
    ]
    if jobs == 1 or len(chunks) == 1:
        parts = [_chunk_product(chunk) for chunk in chunks]
    else:
        with Pool(processes=min(jobs, len(chunks))) as pool:
            parts = pool.map(_chunk_product, chunks, chunksize=1)

    with mpmath.workdps(precision + _GUARD_DPS):
        value = mpmath.mpf(1)
        for part in parts:
            value *= mpmath.mpf(part)
        if g:
            value *= (mpmath.pi**2 / 6) ** (-g)
        spread = 2 * (abs(cubic_log_coefficient(r)) + 1)
        tail = value * spread / mpmath.mpf(cutoff) ** 2
    with mpmath.workdps(precision):
        return EulerProductResult(value=+value, prime_cutoff=cutoff, tail_estimate=+tail)
