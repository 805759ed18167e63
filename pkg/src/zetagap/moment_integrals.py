"""Exact evaluation of the three moment-integral families and their aggregates.

The three families (here `l_int`, `k_int`, `h_int`) are integrals of products
of the configured polynomials and their theta-averages against monomial
weights, over [0,1] or over the triangle 0 <= x, 0 <= y <= 1-x. Every value
reduces to exact rational arithmetic:

* `l_int` expands the product of the two averaged polynomials and reduces each
  monomial against integral_0^1 x^a (1-x)^b dx = beta_int(a+1, b+1).
* `k_int` expands the (1/eta - x)^n2 factor binomially and groups the
  remaining integrand by powers of (x+y), using the simplex reduction
  integral x^a y^b (x+y)^d over the triangle = a! b! / ((a+b+1)! (a+b+d+2)),
  which for d = 0 is the plain a! b! / (a+b+2)! monomial formula. Grouping by
  (x+y)-powers is algebraically identical to fully expanding P(x+y) first
  (see `k_int_by_expansion`, kept as a reference route) but avoids a
  degree-165 blowup in term count.
* `h_int` is the fixed three-term Beta combination of shifted `l_int` values.

The hat-aggregates sum these over all index splits with the `c_const` weights;
`d_const` returns the normalizing constant D divided by pi, exactly.

Results are memoized per configuration; evaluations for distinct series
indices or splits are independent and the caches are insert-or-get with
deterministic values, so concurrent use is benign.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .combinatorics import beta_int, binom, c_const, factorial, iter_split_pairs, omega
from .poly_core import Polynomial, Rat, RatLike, as_rat, compose_sum, theta_average

Index4 = tuple[int, int, int, int]
Index5 = tuple[int, int, int, int, int]


@dataclass(frozen=True)
class GapConfig:
    """The full input tuple for one gap-ratio computation.

    r: order parameter (positive integer).
    eta: exact rational in (0, 1/2]; 1/2 is the limiting value the ratio
        series is evaluated at.
    p0, p2: the two configured polynomials (exact rational coefficients).
    J: series truncation index (the series keeps terms j = 0..J).
    precision: decimal digits used when exact rationals are converted to
        floating values for reports.
    """

    r: int
    eta: Rat
    p0: Polynomial
    p2: Polynomial
    J: int = 30
    precision: int = 50

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"r must be a positive integer, got {self.r!r}")
        eta = as_rat(self.eta)
        object.__setattr__(self, "eta", eta)
        if not 0 < eta <= mpq(1, 2):
            raise ValueError(f"eta must lie in (0, 1/2], got {eta}")
        if not isinstance(self.J, int) or self.J < 0:
            raise ValueError(f"J must be a nonnegative integer, got {self.J!r}")
        if not isinstance(self.precision, int) or self.precision < 1:
            raise ValueError(f"precision must be a positive integer, got {self.precision!r}")
        object.__setattr__(self, "_hash", hash((self.r, self.eta, self.p0, self.p2, self.J, self.precision)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def polynomial(self, i: int) -> Polynomial:
        """The polynomial selected by index i in {0, 2}."""
        if i == 0:
            return self.p0
        if i == 2:
            return self.p2
        raise ValueError(f"polynomial index must be 0 or 2, got {i}")


def _validate_index(n: tuple[int, ...], arity: int) -> None:
    if len(n) != arity:
        raise ValueError(f"index tuple must have {arity} entries, got {n}")
    for entry in n:
        if not isinstance(entry, int) or entry < 0:
            raise ValueError(f"index entries must be nonnegative integers, got {n}")


@lru_cache(maxsize=None)
def _q_poly(cfg: GapConfig, i: int, u: int) -> Polynomial:
    """The theta-average of the polynomial at index i against theta^u."""
    return theta_average(cfg.polynomial(i), u)


@lru_cache(maxsize=None)
def _q_pair_coeffs(cfg: GapConfig, i1: int, u1: int, i2: int, u2: int) -> tuple[Rat, ...]:
    """Dense coefficients of the product of two averaged polynomials."""
    prod = _q_poly(cfg, i1, u1) * _q_poly(cfg, i2, u2)
    return prod.coeffs


@lru_cache(maxsize=None)
def l_int(cfg: GapConfig, i1: int, i2: int, n: Index4) -> Rat:
    """Exact single-variable moment integral for index vector n.

    integral_0^1 x^(r^2+n1+n2-1) (1-x)^(2r+n3+n4) Q_{i1,r+n3-1}(x)
    Q_{i2,r+n4-1}(x) dx, reduced monomial-by-monomial to Beta values.
    """
    _validate_index(n, 4)
    n1, n2, n3, n4 = n
    r = cfg.r
    if cfg.polynomial(i1).is_zero() or cfg.polynomial(i2).is_zero():
        return mpq(0)
    a = r * r + n1 + n2 - 1
    b = 2 * r + n3 + n4
    if a < 0 or r + n3 - 1 < 0 or r + n4 - 1 < 0:
        raise ValueError(f"invalid l-integral indices for r={r}: {n}")
    coeffs = _q_pair_coeffs(cfg, i1, r + n3 - 1, i2, r + n4 - 1)
    total = mpq(0)
    for m, q in enumerate(coeffs):
        if q != 0:
            total += q * beta_int(a + m + 1, b + 1)
    return total


def simplex_monomial_integral(a: int, b: int) -> Rat:
    """integral over the triangle 0<=x, 0<=y<=1-x of x^a y^b = a! b! / (a+b+2)!."""
    if a < 0 or b < 0:
        raise ValueError(f"simplex exponents must be nonnegative, got ({a}, {b})")
    return mpq(factorial(a) * factorial(b), factorial(a + b + 2))


@lru_cache(maxsize=None)
def _simplex_power_integral(a: int, b: int, d: int) -> Rat:
    """integral over the triangle of x^a y^b (x+y)^d = a! b! / ((a+b+1)! (a+b+d+2)).

    Substituting x = uv, y = u(1-v) factorizes the integrand; d = 0 recovers
    simplex_monomial_integral.
    """
    if a < 0 or b < 0 or d < 0:
        raise ValueError(f"simplex exponents must be nonnegative, got ({a}, {b}, {d})")
    return mpq(factorial(a) * factorial(b), factorial(a + b + 1) * (a + b + d + 2))


@lru_cache(maxsize=None)
def _y_side_coeffs(cfg: GapConfig, i2: int, n3: int, n4: int) -> tuple[Rat, ...]:
    """Dense coefficients of y^(r^2+n3-1) (1-y)^(r+n4) Q_{i2,r+n4-1}(y)."""
    r = cfg.r
    shift = r * r + n3 - 1
    b = r + n4
    one_minus = Polynomial.from_coeffs(
        [(-1) ** t * binom(b, t) for t in range(b + 1)]
    )
    prod = one_minus * _q_poly(cfg, i2, r + n4 - 1)
    if prod.is_zero():
        return ()
    return (mpq(0),) * shift + prod.coeffs


@lru_cache(maxsize=None)
def k_int(cfg: GapConfig, i1: int, i2: int, n: Index4) -> Rat:
    """Exact two-variable moment integral over the triangle for index vector n.

    integral of x^(r+n1-1) (1/eta - x)^n2 y^(r^2+n3-1) (1-y)^(r+n4)
    P_{i1}(x+y) Q_{i2,r+n4-1}(y) over 0 <= x, 0 <= y <= 1-x. The (1/eta - x)
    power is expanded binomially; each resulting x^a y^b (x+y)^d monomial
    triple reduces through _simplex_power_integral.
    """
    _validate_index(n, 4)
    n1, n2, n3, n4 = n
    r = cfg.r
    p1 = cfg.polynomial(i1)
    if p1.is_zero() or cfg.polynomial(i2).is_zero():
        return mpq(0)
    if r + n1 - 1 < 0 or r * r + n3 - 1 < 0 or r + n4 - 1 < 0:
        raise ValueError(f"invalid k-integral indices for r={r}: {n}")
    a0 = r + n1 - 1
    ycoeffs = _y_side_coeffs(cfg, i2, n3, n4)
    pterms = tuple(p1.terms())
    inv_eta = 1 / cfg.eta
    # powers of 1/eta, highest first so index t maps to inv_eta^(n2-t)
    eta_pow = [mpq(1)]
    for _ in range(n2):
        eta_pow.append(eta_pow[-1] * inv_eta)
    total = mpq(0)
    for t in range(n2 + 1):
        w = binom(n2, t) * eta_pow[n2 - t]
        if t % 2:
            w = -w
        for b, g in enumerate(ycoeffs):
            if g == 0:
                continue
            wg = w * g
            for d, pd in pterms:
                total += wg * pd * _simplex_power_integral(a0 + t, b, d)
    return total


def k_int_by_expansion(cfg: GapConfig, i1: int, i2: int, n: Index4) -> Rat:
    """Reference route for k_int: full bivariate expansion of P(x+y).

    Expands P_{i1}(x+y) through compose_sum and reduces every x^a y^b monomial
    with simplex_monomial_integral. Identical values to k_int; kept for
    cross-checking because it is simple and slow.
    """
    _validate_index(n, 4)
    n1, n2, n3, n4 = n
    r = cfg.r
    p1 = cfg.polynomial(i1)
    if p1.is_zero() or cfg.polynomial(i2).is_zero():
        return mpq(0)
    a0 = r + n1 - 1
    ycoeffs = _y_side_coeffs(cfg, i2, n3, n4)
    inv_eta = 1 / cfg.eta
    total = mpq(0)
    for (dx, dy), pc in compose_sum(p1).terms.items():
        for t in range(n2 + 1):
            w = binom(n2, t) * inv_eta ** (n2 - t)
            if t % 2:
                w = -w
            for b, g in enumerate(ycoeffs):
                if g == 0:
                    continue
                total += pc * w * g * simplex_monomial_integral(a0 + t + dx, b + dy)
    return total


@lru_cache(maxsize=None)
def h_int(cfg: GapConfig, i1: int, i2: int, n: Index5) -> Rat:
    """The three-term Beta combination of shifted l-integrals.

    Requires n3 >= 1 (the callers always shift the third slot up by one) and
    r + n4 - 1 >= 1 so that every Beta argument is positive; index vectors
    that would request Beta(., 0) are rejected here, and the aggregate layer
    never emits them with a nonzero multiplier.
    """
    _validate_index(n, 5)
    n1, n2, n3, n4, n5 = n
    r = cfg.r
    if n3 < 1:
        raise ValueError(f"h-integral needs n3 >= 1, got {n}")
    if r + n4 - 1 < 1:
        raise ValueError(f"h-integral would hit Beta(., {r + n4 - 1}); rejected: {n}")
    b_low = beta_int(n5 + 1, r + n4 - 1)
    b_high = beta_int(n5 + 1, r + n4)
    inv_eta = 1 / cfg.eta
    return (
        -inv_eta * b_low * l_int(cfg, i1, i2, (n1, n2, n3 - 1, n4 + n5))
        + b_low * l_int(cfg, i1, i2, (n1, n2, n3, n4 + n5))
        + b_high * l_int(cfg, i1, i2, (n1, n2, n3 - 1, n4 + n5 + 1))
    )


Split = tuple[tuple[int, int], tuple[int, int]]


def _split_parts(split: Split) -> tuple[int, int, int, int, int, int]:
    (i1p, i1pp), (i2p, i2pp) = split
    i1 = i1p + i1pp
    i2 = i2p + i2pp
    if i1 not in (0, 2) or i2 not in (0, 2):
        raise ValueError(f"split sums must lie in {{0,2}}, got {split}")
    return i1p, i1pp, i2p, i2pp, i1, i2


def hat_l(cfg: GapConfig, split: Split) -> Rat:
    """eta^-1 l(i1p,i2p,i1pp,i2pp) minus the two index-shifted l values."""
    i1p, i1pp, i2p, i2pp, i1, i2 = _split_parts(split)
    inv_eta = 1 / cfg.eta
    return (
        inv_eta * l_int(cfg, i1, i2, (i1p, i2p, i1pp, i2pp))
        - l_int(cfg, i1, i2, (i1p, i2p, i1pp + 1, i2pp))
        - l_int(cfg, i1, i2, (i1p, i2p, i1pp, i2pp + 1))
    )


def hat_h(cfg: GapConfig, j: int) -> Rat:
    """Split-weighted sum of h-integrals for series index j.

    Per split: c_const times r h(i1p,i2p,i1pp+1,i2pp+1,j) plus
    i2pp (r+i2pp-1) h(i1p,i2p,i1pp+1,i2pp,j+1), where the second term is
    skipped exactly when its multiplier i2pp (r+i2pp-1) vanishes (this is
    what keeps every Beta argument positive, including at r = 1).
    """
    if j < 0:
        raise ValueError(f"series index must be >= 0, got {j}")
    r = cfg.r
    total = mpq(0)
    for split in iter_split_pairs():
        i1p, i1pp, i2p, i2pp, i1, i2 = _split_parts(split)
        if cfg.polynomial(i1).is_zero() or cfg.polynomial(i2).is_zero():
            continue
        weight = c_const(r, i1p, i2p, i1pp, i2pp)
        term = r * h_int(cfg, i1, i2, (i1p, i2p, i1pp + 1, i2pp + 1, j))
        mult2 = i2pp * (r + i2pp - 1)
        if mult2:
            term += mult2 * h_int(cfg, i1, i2, (i1p, i2p, i1pp + 1, i2pp, j + 1))
        total += weight * term
    return total


def hat_k(cfg: GapConfig, j: int) -> Rat:
    """Split-weighted, omega-weighted sum of k-integrals for series index j.

    The inner sum runs n from -2 to min(r-2, j); larger n are absent because
    omega vanishes there.
    """
    if j < 0:
        raise ValueError(f"series index must be >= 0, got {j}")
    r = cfg.r
    total = mpq(0)
    for split in iter_split_pairs():
        i1p, i1pp, i2p, i2pp, i1, i2 = _split_parts(split)
        if cfg.polynomial(i1).is_zero() or cfg.polynomial(i2).is_zero():
            continue
        weight = c_const(r, i1p, i2p, i1pp, i2pp)
        inner = mpq(0)
        for nn in range(-2, min(r - 2, j) + 1):
            om = omega(r, i2pp, nn)
            if om == 0:
                continue
            scale = mpq(
                om * factorial(r + i2pp - 1),
                factorial(j - nn) * factorial(r + i2pp + nn + 1),
            )
            inner += scale * k_int(cfg, i1, i2, (i1pp, j - nn, i1p + i2p, i2pp + nn + 2))
        total += weight * inner
    return total


def d_const(cfg: GapConfig) -> Rat:
    """The normalizing constant divided by pi: sum over splits of c_const * hat_l."""
    total = mpq(0)
    for split in iter_split_pairs():
        i1p, i1pp, i2p, i2pp, i1, i2 = _split_parts(split)
        if cfg.polynomial(i1).is_zero() or cfg.polynomial(i2).is_zero():
            continue
        total += c_const(cfg.r, i1p, i2p, i1pp, i2pp) * hat_l(cfg, split)
    return total
