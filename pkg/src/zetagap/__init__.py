"""zetagap: exact-rational verification and search for zero-gap ratio bounds.

The package evaluates a gap-ratio functional f_r(c) whose certified values
below 1 establish lower bounds c/pi on the largest normalized gap between
consecutive zeros of the zeta function. All moment integrals reduce to exact
rational arithmetic; floating point enters only at the final arbitrary-
precision series summation, which carries a proven truncation-tail bound.

Layers, bottom up: poly_core (exact rational polynomials), combinatorics
(factorials, Beta values, the finite-difference weights), moment_integrals
(the closed-form l/k/h integral families and their series assemblies),
gap_ratio (series evaluation, tail certification, admissibility scans),
euler_product (the independent prime-product constants), optimizer (family
search), cli (the `zetagap` command).
"""

from __future__ import annotations

from .combinatorics import (
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
from .euler_product import EulerProductResult, a_const, local_factor, sieve_primes
from .gap_ratio import RatioReport, f_series, max_admissible_c, tail_bound
from .moment_integrals import (
    GapConfig,
    d_const,
    h_int,
    hat_h,
    hat_k,
    hat_l,
    k_int,
    l_int,
)
from .optimizer import FamilySpec, SearchResult, TraceEntry, optimize
from .poly_core import Polynomial, as_rat, format_poly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "EulerProductResult",
    "FamilySpec",
    "GapConfig",
    "INDEX_SPLITS",
    "Polynomial",
    "RatioReport",
    "SearchResult",
    "TraceEntry",
    "__version__",
    "a_const",
    "as_rat",
    "b_const",
    "beta_int",
    "binom",
    "c_const",
    "d_const",
    "delta",
    "f_series",
    "factorial",
    "format_poly",
    "h_int",
    "hat_h",
    "hat_k",
    "hat_l",
    "iter_split_pairs",
    "k_int",
    "l_int",
    "local_factor",
    "max_admissible_c",
    "omega",
    "optimize",
    "parse_poly",
    "sieve_primes",
    "tail_bound",
]
