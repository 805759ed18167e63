"""Shared builders for the test suite.

The two reference configurations below are the built-in verification targets
of the command-line `verify` subcommand; tests construct them through these
helpers so every suite works with value-identical GapConfig objects and the
process-wide series cache is computed once per pytest run.
"""

from __future__ import annotations

from gmpy2 import mpq

from zetagap.moment_integrals import GapConfig
from zetagap.poly_core import Polynomial


def reference_config_a(**overrides) -> GapConfig:
    """r=2, eta=1/2, P0=x^30, P2=0, J=30: the low-degree reference target."""
    base = dict(
        r=2,
        eta=mpq(1, 2),
        p0=Polynomial.monomial(30),
        p2=Polynomial.zero(),
        J=30,
        precision=50,
    )
    base.update(overrides)
    return GapConfig(**base)


def reference_config_b(**overrides) -> GapConfig:
    """r=2, eta=1/2, P0=x^30, P2=-157/5 x^165, J=30: the high-degree target."""
    base = dict(
        r=2,
        eta=mpq(1, 2),
        p0=Polynomial.monomial(30),
        p2=Polynomial.monomial(165, mpq(-157, 5)),
        J=30,
        precision=50,
    )
    base.update(overrides)
    return GapConfig(**base)


def unit_config(**overrides) -> GapConfig:
    """Constant polynomials: the cheapest nondegenerate configuration."""
    base = dict(
        r=2,
        eta=mpq(1, 2),
        p0=Polynomial.monomial(0, 1),
        p2=Polynomial.monomial(0, 1),
        J=20,
        precision=40,
    )
    base.update(overrides)
    return GapConfig(**base)
