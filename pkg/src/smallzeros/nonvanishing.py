"""Small points where a polynomial, or a product of linear forms, is nonzero.

A nonzero polynomial of total degree ``M`` cannot vanish on the whole box
``[-B, B]^N`` with ``B = floor(M/2) + 1``, so scanning that box always
succeeds. The scan visits shells outward from the origin in the order of
:mod:`smallzeros.lattice`, which makes the answer deterministic and no
larger than necessary in sup-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .arith import LinearForm, RationalVector, primitive_rep, to_fraction
from .errors import DimensionError, ZeroFormError
from .lattice import linear_values, scan

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    nvars: int
    terms: Tuple[Tuple[Monomial, Fraction], ...]

    @classmethod
    def from_dict(cls, nvars: int, terms: Dict[Monomial, object]) -> "Polynomial":
        clean = {}
        for mono, c in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise DimensionError(f"bad exponent tuple {mono} for {nvars} variables")
            c = to_fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
        return cls(nvars, tuple(sorted((m, c) for m, c in clean.items() if c)))

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = c
        return cls.from_dict(n, terms)

    @classmethod
    def affine(cls, coeffs: Sequence, const=0) -> "Polynomial":
        """``const + sum c_i X_i``."""
        terms = dict(cls.linear(coeffs).terms)
        key = (0,) * len(coeffs)
        terms[key] = terms.get(key, Fraction(0)) + to_fraction(const)
        return cls.from_dict(len(coeffs), terms)

    @classmethod
    def product_of_linear(cls, forms: Iterable[Sequence]) -> "Polynomial":
        return cls.product_of_affine((f, 0) for f in forms)

    @classmethod
    def product_of_affine(cls, factors: Iterable[Tuple[Sequence, object]]) -> "Polynomial":
        """Product of affine factors given as ``(coeffs, const)`` pairs."""
        factors = list(factors)
        if not factors:
            raise ValueError("need at least one factor")
        out = cls.affine(*factors[0])
        for f in factors[1:]:
            out = out * cls.affine(*f)
        return out

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.nvars != other.nvars:
            raise DimensionError("polynomials in different numbers of variables")
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(self.nvars, acc)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.nvars:
            raise DimensionError(f"polynomial in {self.nvars} variables, point has {len(x)}")
        total = Fraction(0)
        for mono, c in self.terms:
            v = c
            for xi, e in zip(x, mono):
                if e:
                    v *= to_fraction(xi) ** e
            total += v
        return total

    def values(self, X: np.ndarray) -> np.ndarray:
        """Values at the integer rows of ``X``, scaled by a positive constant."""
        den = 1
        for _, c in self.terms:
            den = math.lcm(den, c.denominator)
        Xo = X.astype(object)
        out = np.zeros(len(X), dtype=object)
        for mono, c in self.terms:
            term = np.full(len(X), int(c * den), dtype=object)
            for i, e in enumerate(mono):
                if e:
                    term = term * Xo[:, i] ** e
            out = out + term
        return out


def box_radius(degree: int) -> int:
    return degree // 2 + 1


def nonvanishing_point_poly(U: Polynomial) -> Tuple[int, ...]:
    """First integer point of the box ``|x| <= floor(deg U / 2) + 1`` with ``U(x) != 0``."""
    if U.is_zero():
        raise ZeroFormError("the zero polynomial vanishes everywhere")
    if U.nvars == 0:
        return ()
    origin = np.zeros((1, U.nvars), dtype=np.int64)
    if U.values(origin)[0] != 0:
        return (0,) * U.nvars
    for _, chunk in scan(U.nvars, box_radius(U.degree), canonical=False, primitive=False):
        hits = np.flatnonzero(U.values(chunk) != 0)
        if len(hits):
            return tuple(int(c) for c in chunk[hits[0]])
    raise AssertionError(f"{U} vanishes on its whole search box")


def nonvanishing_point_linear(Ls: Sequence[LinearForm], radius: Optional[int] = None) -> RationalVector:
    """Primitive integer ``w`` with every ``L_i(w) != 0`` and ``|w| <= floor(M/2) + 1``.

    The product of the ``M`` forms is a polynomial of degree ``M``, so the
    box bound applies; rays are scanned once each, through canonical
    primitive representatives.
    """
    if not Ls:
        raise ValueError("need at least one linear form")
    n = Ls[0].dim
    for L in Ls:
        if L.dim != n:
            raise DimensionError("linear forms in different numbers of variables")
        if L.is_zero():
            raise ZeroFormError("a linear form is identically zero")
    qs = [primitive_rep(L.coeffs) for L in Ls]
    R = box_radius(len(Ls)) if radius is None else radius
    for _, chunk in scan(n, R):
        mask = np.ones(len(chunk), dtype=bool)
        for q in qs:
            mask &= linear_values(q, chunk) != 0
        hits = np.flatnonzero(mask)
        if len(hits):
            return tuple(Fraction(int(c)) for c in chunk[hits[0]])
    raise AssertionError("no point off the hyperplanes inside the box")
