"""Exact polynomials over the rationals.

Univariate polynomials are stored densely: ``coeffs[k]`` is the coefficient of
x^k, every coefficient an exact ``gmpy2.mpq``. The trailing coefficient is
nonzero unless the polynomial is identically zero, and degree(0) is the -1
sentinel. Bivariate polynomials (needed only as the expansion of P(x+y)) are
stored sparsely as a map from (deg_x, deg_y) to nonzero rational coefficients.

All values are immutable after construction and all operations are pure, so
polynomials can be shared freely between threads or worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Union

from gmpy2 import mpq

Rat = mpq
RatLike = Union[int, str, Fraction, mpq]


def as_rat(value: RatLike) -> Rat:
    """Coerce ints, Fractions and "p/q" / decimal strings to an exact mpq."""
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            # Fraction accepts both "p/q" and decimal literals, exactly.
            return mpq(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational literal: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial with exact rational coefficients."""

    coeffs: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing coefficient must be nonzero (normalize first)")
        object.__setattr__(self, "_hash", hash(self.coeffs))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    @staticmethod
    def from_coeffs(coeffs: Iterable[RatLike]) -> "Polynomial":
        """Build from an ascending coefficient sequence, stripping trailing zeros."""
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Polynomial(tuple(cs))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def monomial(degree: int, coeff: RatLike = 1) -> "Polynomial":
        """The single-term polynomial coeff * x^degree."""
        if degree < 0:
            raise ValueError(f"degree must be >= 0, got {degree}")
        c = as_rat(coeff)
        if c == 0:
            return Polynomial(())
        return Polynomial((mpq(0),) * degree + (c,))

    @staticmethod
    def from_terms(terms: Iterable[tuple[int, RatLike]]) -> "Polynomial":
        """Build from (degree, coefficient) pairs; repeated degrees accumulate."""
        acc: dict[int, Rat] = {}
        for degree, coeff in terms:
            if degree < 0:
                raise ValueError(f"degree must be >= 0, got {degree}")
            acc[degree] = acc.get(degree, mpq(0)) + as_rat(coeff)
        if not acc:
            return Polynomial(())
        top = max(acc)
        return Polynomial.from_coeffs([acc.get(k, mpq(0)) for k in range(top + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> Iterator[tuple[int, Rat]]:
        """Yield (degree, coefficient) for the nonzero terms, ascending."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                yield k, c

    def eval_at(self, x: RatLike) -> Rat:
        """Evaluate by Horner's rule, exactly."""
        xq = as_rat(x)
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * xq + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Polynomial.from_coeffs(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, factor: RatLike) -> "Polynomial":
        f = as_rat(factor)
        if f == 0:
            return Polynomial(())
        return Polynomial(tuple(c * f for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Polynomial(tuple(out))


class BivariatePoly:
    """Sparse exact polynomial in two variables, keyed by (deg_x, deg_y)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], RatLike]):
        cleaned: dict[tuple[int, int], Rat] = {}
        for (dx, dy), coeff in terms.items():
            if dx < 0 or dy < 0:
                raise ValueError(f"negative degree pair {(dx, dy)}")
            c = as_rat(coeff)
            if c != 0:
                cleaned[(dx, dy)] = c
        self.terms: dict[tuple[int, int], Rat] = cleaned

    def eval_at(self, x: RatLike, y: RatLike) -> Rat:
        xq, yq = as_rat(x), as_rat(y)
        return sum((c * xq**dx * yq**dy for (dx, dy), c in self.terms.items()), mpq(0))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"BivariatePoly({self.terms!r})"


def eval_at(p: Polynomial, x: RatLike) -> Rat:
    """Exact evaluation of p at a rational point."""
    return p.eval_at(x)


@lru_cache(maxsize=None)
def theta_average(p: Polynomial, u: int) -> Polynomial:
    """Average p over the segment from x to 1 against the weight theta^u.

    Returns the exact polynomial q(x) = integral_0^1 theta^u p(x + theta(1-x))
    dtheta, obtained by expanding (x + theta(1-x))^k binomially and integrating
    each theta-monomial in closed form. The result has the same degree as p.
    """
    if u < 0:
        raise ValueError(f"u must be >= 0, got {u}")
    if p.is_zero():
        return Polynomial(())
    out = [mpq(0)] * (p.degree + 1)
    for k, a in p.terms():
        # (x + theta(1-x))^k = sum_j C(k,j) x^j theta^(k-j) (1-x)^(k-j)
        for j in range(k + 1):
            base = a * comb(k, j) / mpq(u + k - j + 1)
            # expand (1-x)^(k-j) and fold into the dense output
            for t in range(k - j + 1):
                term = base * comb(k - j, t)
                if t % 2:
                    term = -term
                out[j + t] += term
    return Polynomial.from_coeffs(out)


def sup_bound(p: Polynomial) -> Rat:
    """Sum of absolute coefficients: an upper bound for |p(x)| on [0, 1]."""
    return sum((abs(c) for c in p.coeffs), mpq(0))


def compose_sum(p: Polynomial) -> BivariatePoly:
    """Exact bivariate expansion of p(x + y) by the binomial theorem."""
    terms: dict[tuple[int, int], Rat] = {}
    for k, a in p.terms():
        for j in range(k + 1):
            key = (j, k - j)
            terms[key] = terms.get(key, mpq(0)) + a * comb(k, j)
    return BivariatePoly(terms)


def parse_poly(entries: str | Iterable[str]) -> Polynomial:
    """Parse the text form: "degree:coefficient" entries, comma separated.

    Coefficients may be "p/q" rationals or decimal literals; decimals convert
    exactly (e.g. "-31.4" becomes -157/5). An empty string is the zero
    polynomial.
    """
    if isinstance(entries, str):
        parts = [piece.strip() for piece in entries.split(",")]
        parts = [piece for piece in parts if piece]
    else:
        parts = [str(piece).strip() for piece in entries]
    pairs: list[tuple[int, Rat]] = []
    for part in parts:
        if ":" not in part:
            raise ValueError(f"expected 'degree:coefficient', got {part!r}")
        deg_text, coeff_text = part.split(":", 1)
        try:
            degree = int(deg_text.strip())
        except ValueError as exc:
            raise ValueError(f"bad degree in {part!r}") from exc
        if degree < 0:
            raise ValueError(f"degree must be >= 0 in {part!r}")
        pairs.append((degree, as_rat(coeff_text)))
    return Polynomial.from_terms(pairs)


def format_poly(p: Polynomial) -> str:
    """Inverse of parse_poly: nonzero terms as "degree:coefficient", ascending."""
    return ", ".join(f"{k}:{c}" for k, c in p.terms())
