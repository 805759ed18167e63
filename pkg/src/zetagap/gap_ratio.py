"""Assembly of the gap-ratio series, certified tail bounds, and admissibility.

The ratio functional is

    f(c) = (1/D) sum_{j=0..J} (-1)^j c^(2j+1) / 4^j
               * ( hh(2j)/(2j+1)! + kk(2j)/(2j+1) )  +  c/pi

where hh, kk and D/pi are exact rationals produced by the moment-integral
layer; floating point enters only through powers of c and the final division
by pi, evaluated with mpmath at the configured precision plus guard digits.

A verdict "admissible" (f + tail < 1, implying the gap bound lambda >= c/pi)
is only ever issued with a certified upper bound on the omitted tail:

* the hh-part tail uses a uniform bound M_h >= |hh(2j)| of the shape
  64 * 4 * M^2 (M = the sup bound of the configured polynomials; the 4
  generalizes to 1/eta + 2), with factorial decay controlled through
  n! > (n/e)^n and closed by a geometric sum;
* the kk-part tail bounds each split/n row separately: the k-integral is
  bounded by eta^(-n2) a!/(eta n2)^(a+1) times an exact Beta factor for the
  y-side, and the explicit 1/(2j-n)! inside kk gives factorial decay, again
  closed geometrically from the first omitted index.

Both parts are reported separately. If the geometric-domination condition
fails at the requested J, the bound is +inf and the point is simply not
admissible; no verdict is ever based on the truncated value alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import mpmath
from gmpy2 import mpq

from .combinatorics import beta_int, c_const, factorial, iter_split_pairs, omega
from .moment_integrals import GapConfig, d_const, hat_h, hat_k
from .poly_core import Polynomial, Rat, as_rat, sup_bound

RealLike = Union[int, float, str, mpq, mpmath.mpf]

_GUARD_DPS = 15
_GRID_POINTS = 256


@dataclass(frozen=True)
class KTailRow:
    """One split/n row of the kk-part tail bound, c- and J-independent parts."""

    n: int
    a: int
    coeff: Rat  # exact: weight * omega magnitude * factorials * sup bounds * Beta


@dataclass(frozen=True)
class SeriesData:
    """Exact series coefficients and tail constants for one configuration."""

    hh: tuple[Rat, ...]
    kk: tuple[Rat, ...]
    d_rho: Rat  # D / pi
    m_q: Rat  # max sup bound over the two polynomials
    s_h: Rat  # sum over all splits of |c_const| (r + i2pp (r + i2pp - 1))
    k_rows: tuple[KTailRow, ...]


@dataclass(frozen=True)
class RatioReport:
    """One evaluation of the ratio functional with its certified verdict."""

    c: mpmath.mpf
    c_over_pi: mpmath.mpf
    f_value: mpmath.mpf
    truncation_J: int
    tail_bound: mpmath.mpf
    tail_h_bound: mpmath.mpf
    tail_k_bound: mpmath.mpf
    admissible: bool
    lambda_bound: Optional[mpmath.mpf]
    d_value: mpmath.mpf
    bracketing_ok: bool
    precision: int


@lru_cache(maxsize=16)
def _series_data_raw(r: int, eta: Rat, p0: Polynomial, p2: Polynomial, J: int) -> SeriesData:
    cfg = GapConfig(r=r, eta=eta, p0=p0, p2=p2, J=J, precision=50)
    hh = tuple(hat_h(cfg, 2 * j) for j in range(J + 1))
    kk = tuple(hat_k(cfg, 2 * j) for j in range(J + 1))
    d_rho = d_const(cfg)
    m0 = sup_bound(p0)
    m2 = sup_bound(p2)
    m_q = max(m0, m2)
    inv_eta = 1 / eta

    s_h = mpq(0)
    for split in iter_split_pairs():
        (i1p, i1pp), (i2p, i2pp) = split
        weight = abs(c_const(r, i1p, i2p, i1pp, i2pp))
        s_h += weight * (r + i2pp * (r + i2pp - 1))

    sup_of = {0: m0, 2: m2}
    rows: list[KTailRow] = []
    for split in iter_split_pairs():
        (i1p, i1pp), (i2p, i2pp) = split
        i1 = i1p + i1pp
        i2 = i2p + i2pp
        if sup_of[i1] == 0 or sup_of[i2] == 0:
            continue  # these splits contribute exactly zero to kk
        weight = abs(c_const(r, i1p, i2p, i1pp, i2pp))
        for nn in range(-2, r - 2 + 1):
            om = abs(omega(r, i2pp, nn))
            if om == 0:
                continue
            a = r + i1pp - 1  # x-power in the k-integral
            y_power = r * r + (i1p + i2p) - 1
            bp = r + (i2pp + nn + 2)  # (1-y)-power, also u+1 of the averaged factor
            coeff = (
                weight
                * om
                * mpq(factorial(r + i2pp - 1), factorial(r + i2pp + nn + 1))
                * sup_of[i1]
                * sup_of[i2]
                * beta_int(y_power + 1, bp + 1)
                / bp
                * factorial(a)
                * inv_eta ** (a + 1)
            )
            rows.append(KTailRow(n=nn, a=a, coeff=coeff))
    return SeriesData(hh=hh, kk=kk, d_rho=d_rho, m_q=m_q, s_h=s_h, k_rows=tuple(rows))


def series_data(cfg: GapConfig) -> SeriesData:
    """Exact series coefficients for cfg, cached independently of precision."""
    return _series_data_raw(cfg.r, cfg.eta, cfg.p0, cfg.p2, cfg.J)


def _rat_to_mpf(q: Rat) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


def _to_mpf(value: RealLike) -> mpmath.mpf:
    if isinstance(value, mpq):
        return _rat_to_mpf(value)
    if isinstance(value, str):
        return _rat_to_mpf(as_rat(value))
    return mpmath.mpf(value)


def _tail_parts_from(data: SeriesData, cfg: GapConfig, c: mpmath.mpf, J: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Certified upper bounds for the omitted hh- and kk-part tails past J."""
    inf = mpmath.inf
    d_abs = abs(mpmath.pi * _rat_to_mpf(data.d_rho))
    if d_abs == 0:
        return inf, inf
    inv_eta = _rat_to_mpf(1 / cfg.eta)
    m_q = _rat_to_mpf(data.m_q)

    # hh part: |hh(2j)| <= M_h uniformly; (2j+1)! > ((2j+1)/e)^(2j+1) turns the
    # sum past J into a geometric series with ratio rho^2.
    m_h = max(mpmath.mpf(256), _rat_to_mpf(data.s_h) * (inv_eta + 2)) * m_q**2
    rho = c * mpmath.e / (2 * (2 * J + 3))
    if rho >= 1:
        tail_h = inf
    else:
        tail_h = (m_h * c / d_abs) * rho ** (2 * (J + 1)) / (1 - rho**2)

    # kk part: row-by-row first omitted term times a geometric closure.
    q = c * inv_eta / 2
    tail_k = mpmath.mpf(0)
    for row in data.k_rows:
        m1 = 2 * (J + 1) - row.n
        ratio = q**2 / ((m1 + 1) * (m1 + 2))
        if ratio >= 1:
            tail_k = inf
            break
        first = q**m1 / _rat_to_mpf(mpq(factorial(m1)))
        piece = (
            _rat_to_mpf(row.coeff)
            * (c / 2) ** row.n
            * first
            / mpmath.mpf(m1) ** (row.a + 1)
            / (2 * J + 3)
            / (1 - ratio)
        )
        tail_k += piece
    tail_k = tail_k * c / d_abs
    return tail_h, tail_k


def tail_bound(cfg: GapConfig, c: RealLike, J: int) -> mpmath.mpf:
    """Certified upper bound on the absolute omitted tail past index J."""
    if J < 1:
        raise ValueError(f"tail bound needs J >= 1, got {J}")
    data = series_data(cfg)
    with mpmath.workdps(cfg.precision + _GUARD_DPS):
        c_mpf = _to_mpf(c)
        if c_mpf <= 0:
            raise ValueError(f"c must be positive, got {c!r}")
        tail_h, tail_k = _tail_parts_from(data, cfg, c_mpf, J)
        total = tail_h + tail_k
    with mpmath.workdps(cfg.precision):
        return +total


def f_series(cfg: GapConfig, c: RealLike) -> RatioReport:
    """Evaluate the truncated ratio series at c with a certified tail bound.

    Exact rational series coefficients are converted to floats once, summed in
    index order at the working precision, and combined with the certified tail
    to produce the admissibility verdict.
    """
    data = series_data(cfg)
    if data.d_rho == 0:
        raise ValueError("degenerate configuration: normalizing constant D is zero")
    J = cfg.J
    with mpmath.workdps(cfg.precision + _GUARD_DPS):
        c_mpf = _to_mpf(c)
        if c_mpf <= 0:
            raise ValueError(f"c must be positive, got {c!r}")
        d_val = mpmath.pi * _rat_to_mpf(data.d_rho)
        c_sq_quarter = c_mpf**2 / 4
        power = c_mpf  # c^(2j+1) / 4^j, updated per term
        total = mpmath.mpf(0)
        h_mags: list[mpmath.mpf] = []
        for j in range(J + 1):
            hh_j = _rat_to_mpf(data.hh[j] / mpq(factorial(2 * j + 1)))
            kk_j = _rat_to_mpf(data.kk[j] / (2 * j + 1))
            term = power * (hh_j + kk_j)
            total += term if j % 2 == 0 else -term
            h_mags.append(abs(power * hh_j))
            power *= c_sq_quarter

        # Past 2j+1 > c e (twice the Stirling threshold c e / 2) consecutive
        # hh-part terms must shrink, so partial sums bracket the limit.
        bracketing_ok = True
        for j in range(J):
            if 2 * j + 1 > c_mpf * mpmath.e and h_mags[j + 1] > h_mags[j]:
                bracketing_ok = False
        f_value = total / d_val + c_mpf / mpmath.pi
        tail_h, tail_k = _tail_parts_from(data, cfg, c_mpf, J)
        tail_total = tail_h + tail_k
        admissible = bool(f_value + tail_total < 1)
        lam = c_mpf / mpmath.pi if admissible else None
        c_over_pi = c_mpf / mpmath.pi
    with mpmath.workdps(cfg.precision):
        return RatioReport(
            c=+c_mpf,
            c_over_pi=+c_over_pi,
            f_value=+f_value,
            truncation_J=J,
            tail_bound=+tail_total,
            tail_h_bound=+tail_h,
            tail_k_bound=+tail_k,
            admissible=admissible,
            lambda_bound=(+lam if lam is not None else None),
            d_value=+d_val,
            bracketing_ok=bracketing_ok,
            precision=cfg.precision,
        )


def max_admissible_c(cfg: GapConfig, c_lo: RealLike, c_hi: RealLike, tol: RealLike) -> RatioReport:
    """Largest certified admissible c on [c_lo, c_hi], located to width tol.

    Scans a 256-point inclusive grid first (the functional is not assumed
    monotone in c), then bisects the rightmost admissible-to-inadmissible
    transition. Every returned report is certified admissible.
    """
    with mpmath.workdps(cfg.precision + _GUARD_DPS):
        lo = _to_mpf(c_lo)
        hi = _to_mpf(c_hi)
        width = _to_mpf(tol)
        if not lo < hi:
            raise ValueError(f"need c_lo < c_hi, got {c_lo!r}, {c_hi!r}")
        if width <= 0:
            raise ValueError(f"need tol > 0, got {tol!r}")
        step = (hi - lo) / (_GRID_POINTS - 1)
        reports = [f_series(cfg, lo + step * i) for i in range(_GRID_POINTS)]
        best_idx = -1
        for i, rep in enumerate(reports):
            if rep.admissible:
                best_idx = i
        if best_idx < 0:
            raise ValueError("no admissible c on the scanned interval")
        if best_idx == _GRID_POINTS - 1:
            return reports[best_idx]
        a = lo + step * best_idx
        b = lo + step * (best_idx + 1)
        best = reports[best_idx]
        while b - a > width:
            mid = (a + b) / 2
            rep = f_series(cfg, mid)
            if rep.admissible:
                a = mid
                best = rep
            else:
                b = mid
        return best
