"""Derivative-free search over monomial polynomial families.

A family is the grid (r, d0, d2) of parameter and degree choices crossed with
a rational interval for the single P2 coefficient; P0 is x^d0 with unit
coefficient (the functional is invariant under scaling both polynomials
together, so only the relative size of P2 matters). Candidates are evaluated
by maximizing the certified admissible c on a fixed bracket; the coefficient
coordinate is refined by golden-section steps executed in exact rational
arithmetic (the golden ratio is replaced by the Fibonacci quotient 377/610),
so every probe is a hashable exact configuration and a fixed family yields an
identical trace on every run.

The budget counts configuration evaluations — one per admissibility
maximization, the unit of work a caller perceives — not the individual series
evaluations inside the scan. A budget of 1 therefore evaluates exactly one
configuration and returns it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
from gmpy2 import mpq

from .gap_ratio import RatioReport, max_admissible_c
from .moment_integrals import GapConfig
from .poly_core import Polynomial, Rat, RatLike, as_rat, format_poly

_INV_PHI = mpq(377, 610)  # F_14/F_15: exact, monotone-convergent section ratio


def _as_tuple_int(values: Sequence[int], label: str) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if not out:
        raise ValueError(f"{label} must be nonempty")
    return out


@dataclass(frozen=True)
class FamilySpec:
    """One search family: degree grids, a coefficient interval, and budgets."""

    p0_degrees: tuple[int, ...]
    p2_degrees: tuple[int, ...]
    p2_coeff_range: tuple[Rat, Rat]
    r_values: tuple[int, ...]
    budget: int
    eta: Rat = mpq(1, 2)
    J: int = 30
    precision: int = 50
    c_lo_mult: Rat = mpq(5, 2)  # scan bracket endpoints, in units of pi
    c_hi_mult: Rat = mpq(7, 2)
    scan_tol_mult: Rat = mpq(1, 10**6)  # bisection width, in units of pi
    coeff_tol: Rat = mpq(1, 20)  # stop refining the coefficient below this

    def __init__(
        self,
        p0_degrees: Sequence[int],
        p2_degrees: Sequence[int],
        p2_coeff_range: tuple[RatLike, RatLike],
        r_values: Sequence[int],
        budget: int,
        eta: RatLike = mpq(1, 2),
        J: int = 30,
        precision: int = 50,
        c_lo_mult: RatLike = mpq(5, 2),
        c_hi_mult: RatLike = mpq(7, 2),
        scan_tol_mult: RatLike = mpq(1, 10**6),
        coeff_tol: RatLike = mpq(1, 20),
    ):
        object.__setattr__(self, "p0_degrees", _as_tuple_int(p0_degrees, "p0_degrees"))
        object.__setattr__(self, "p2_degrees", _as_tuple_int(p2_degrees, "p2_degrees"))
        lo, hi = (as_rat(p2_coeff_range[0]), as_rat(p2_coeff_range[1]))
        if lo > hi:
            raise ValueError(f"coefficient interval is empty: [{lo}, {hi}]")
        object.__setattr__(self, "p2_coeff_range", (lo, hi))
        object.__setattr__(self, "r_values", _as_tuple_int(r_values, "r_values"))
        if any(r < 1 for r in self.r_values):
            raise ValueError(f"r values must be >= 1, got {self.r_values}")
        if any(d < 0 for d in self.p0_degrees + self.p2_degrees):
            raise ValueError("degrees must be >= 0")
        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")
        object.__setattr__(self, "budget", int(budget))
        object.__setattr__(self, "eta", as_rat(eta))
        if not 0 < self.eta <= mpq(1, 2):
            raise ValueError(f"eta must lie in (0, 1/2], got {self.eta}")
        if J < 0:
            raise ValueError(f"J must be >= 0, got {J}")
        object.__setattr__(self, "J", int(J))
        if precision < 1:
            raise ValueError(f"precision must be >= 1, got {precision}")
        object.__setattr__(self, "precision", int(precision))
        object.__setattr__(self, "c_lo_mult", as_rat(c_lo_mult))
        object.__setattr__(self, "c_hi_mult", as_rat(c_hi_mult))
        if not 0 < self.c_lo_mult < self.c_hi_mult:
            raise ValueError("need 0 < c_lo_mult < c_hi_mult")
        object.__setattr__(self, "scan_tol_mult", as_rat(scan_tol_mult))
        object.__setattr__(self, "coeff_tol", as_rat(coeff_tol))
        if self.scan_tol_mult <= 0 or self.coeff_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class TraceEntry:
    """One evaluated configuration: its summary and certification outcome."""

    config_summary: str
    c_star: Optional[mpmath.mpf]  # largest certified admissible c, if any
    lambda_bound: Optional[mpmath.mpf]
    best_lambda: Optional[mpmath.mpf]  # running best after this evaluation


@dataclass(frozen=True)
class SearchResult:
    best_config: GapConfig
    best_report: RatioReport
    evaluations: int
    trace: tuple[TraceEntry, ...]


def _summarize(cfg: GapConfig) -> str:
    p0 = format_poly(cfg.p0) or "0"
    p2 = format_poly(cfg.p2) or "0"
    return f"r={cfg.r} p0=[{p0}] p2=[{p2}]"


def _total_degree(cfg: GapConfig) -> int:
    return max(cfg.p0.degree, 0) + max(cfg.p2.degree, 0)


class _Search:
    """Mutable state for one optimize() run: budget, cache, trace, best."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.remaining = spec.budget
        self.seen: dict[GapConfig, Optional[RatioReport]] = {}
        self.trace: list[TraceEntry] = []
        self.best_cfg: Optional[GapConfig] = None
        self.best_report: Optional[RatioReport] = None
        self.evaluations = 0

    def best_lambda(self) -> Optional[mpmath.mpf]:
        return self.best_report.lambda_bound if self.best_report else None

    def probe(self, cfg: GapConfig) -> Optional[RatioReport]:
        """Evaluate one configuration, consuming budget unless cached."""
        if cfg in self.seen:
            return self.seen[cfg]
        if self.remaining == 0:
            raise _BudgetExhausted
        self.remaining -= 1
        self.evaluations += 1
        spec = self.spec
        def scaled_pi(mult: Rat) -> mpmath.mpf:
            return mpmath.pi * mpmath.mpf(mult.numerator) / mpmath.mpf(mult.denominator)

        with mpmath.workdps(spec.precision + 15):
            lo = scaled_pi(spec.c_lo_mult)
            hi = scaled_pi(spec.c_hi_mult)
            tol = scaled_pi(spec.scan_tol_mult)
            try:
                report: Optional[RatioReport] = max_admissible_c(cfg, lo, hi, tol)
            except ValueError:
                report = None  # nothing admissible on the bracket
        self.seen[cfg] = report
        self._record(cfg, report)
        return report

    def _record(self, cfg: GapConfig, report: Optional[RatioReport]) -> None:
        if report is not None and self._improves(cfg, report):
            self.best_cfg = cfg
            self.best_report = report
        self.trace.append(
            TraceEntry(
                config_summary=_summarize(cfg),
                c_star=report.c if report else None,
                lambda_bound=report.lambda_bound if report else None,
                best_lambda=self.best_lambda(),
            )
        )

    def _improves(self, cfg: GapConfig, report: RatioReport) -> bool:
        if self.best_report is None:
            return True
        if report.lambda_bound != self.best_report.lambda_bound:
            return report.lambda_bound > self.best_report.lambda_bound
        # equal certified bounds break toward the cheaper configuration;
        # a later candidate never displaces an equal earlier one
        assert self.best_cfg is not None
        return _total_degree(cfg) < _total_degree(self.best_cfg)


class _BudgetExhausted(Exception):
    pass


def _lambda_key(report: Optional[RatioReport]) -> mpmath.mpf:
    if report is None or report.lambda_bound is None:
        return mpmath.mpf("-inf")
    return report.lambda_bound


def optimize(spec: FamilySpec) -> SearchResult:
    """Exhaustive degree/r grid with golden-section coefficient refinement.

    Candidates are visited in the listed order (r outermost, then p0 degree,
    then p2 degree); within each grid cell the P2 coefficient is refined by
    exact golden-section steps until the interval is narrower than coeff_tol
    or the budget runs out. Only certified-admissible reports compete; the
    search never returns an uncertified improvement.
    """
    state = _Search(spec)
    try:
        for r in spec.r_values:
            for d0 in spec.p0_degrees:
                for d2 in spec.p2_degrees:
                    _search_coefficient(state, r, d0, d2)
    except _BudgetExhausted:
        pass
    if state.best_report is None or state.best_cfg is None:
        raise ValueError("no configuration in the family is admissible on the bracket")
    return SearchResult(
        best_config=state.best_cfg,
        best_report=state.best_report,
        evaluations=state.evaluations,
        trace=tuple(state.trace),
    )


def _make_config(spec: FamilySpec, r: int, d0: int, d2: int, coeff: Rat) -> GapConfig:
    p2 = Polynomial.monomial(d2, coeff) if coeff != 0 else Polynomial.zero()
    return GapConfig(
        r=r,
        eta=spec.eta,
        p0=Polynomial.monomial(d0, 1),
        p2=p2,
        J=spec.J,
        precision=spec.precision,
    )


def _search_coefficient(state: _Search, r: int, d0: int, d2: int) -> None:
    spec = state.spec
    lo, hi = spec.p2_coeff_range
    if lo == hi:
        state.probe(_make_config(spec, r, d0, d2, lo))
        return
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = _lambda_key(state.probe(_make_config(spec, r, d0, d2, x1)))
    f2 = _lambda_key(state.probe(_make_config(spec, r, d0, d2, x2)))
    while hi - lo > spec.coeff_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = _lambda_key(state.probe(_make_config(spec, r, d0, d2, x2)))
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = _lambda_key(state.probe(_make_config(spec, r, d0, d2, x1)))
