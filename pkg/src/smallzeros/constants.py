"""Field constants and height bounds with certified enclosures.

Every bound is carried as a :class:`BoundValue`, an interval ``[lo, hi]``
with dyadic rational endpoints produced by mpmath's interval context. The
exact real value always lies inside. A height ``h`` *passes* a bound when
``h <= lo`` and *violates* it when ``h > hi``; anything in between is
reported as undecided rather than guessed.

The Gamma factor in the field constant is evaluated symbolically (a
factorial for even ``N``, a double factorial times ``sqrt(pi)`` for odd
``N``), so only ``pi`` and one square root ever reach the interval stage.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

from mpmath import iv

from .arith import LinearForm, QuadraticForm
from .errors import PreconditionError
from .heights import form_height

DEFAULT_PREC = 128

Rational = Union[int, Fraction]


@contextlib.contextmanager
def _precision(prec: int):
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _iv(value: Rational):
    value = Fraction(value)
    if value.denominator == 1:
        return iv.mpf(value.numerator)
    return iv.mpf(value.numerator) / value.denominator


@dataclass(frozen=True)
class BoundValue:
    """Certified enclosure ``lo <= exact value <= hi``."""

    lo: Fraction
    hi: Fraction
    prec: int

    @classmethod
    def _from_interval(cls, x, prec: int) -> "BoundValue":
        a, b = x._mpi_
        return cls(_mpf_to_fraction(a), _mpf_to_fraction(b), prec)

    @classmethod
    def exact(cls, value: Rational, prec: int = DEFAULT_PREC) -> "BoundValue":
        v = Fraction(value)
        return cls(v, v, prec)

    @property
    def value(self) -> Fraction:
        """The certified upper value."""
        return self.hi

    def relative_width(self) -> Fraction:
        if self.hi == self.lo:
            return Fraction(0)
        return (self.hi - self.lo) / abs(self.lo)

    def check(self, height: Rational) -> Optional[bool]:
        """True if ``height <= exact``, False if ``height > exact``, None if undecided."""
        if height <= self.lo:
            return True
        if height > self.hi:
            return False
        return None

    def __float__(self):
        return float(self.hi)

    def __repr__(self):
        return f"BoundValue(~{float(self.hi):.6g}, prec={self.prec})"


def _dfact(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _a_interval(N: int):
    if N % 2 == 0:
        k = N // 2
        num = 2 ** (5 * k) * (N + 1) ** k * math.factorial(k)
        return iv.mpf(num) / iv.pi ** k
    # odd N: pi^{-N/2} Gamma(N/2 + 1) = N!! / 2^{(N+1)/2} * pi^{-(N-1)/2}
    k = (N - 1) // 2
    num = 2 ** (2 * N - 1) * (N + 1) ** k * _dfact(N)
    return iv.mpf(num) * iv.sqrt(iv.mpf(2 * (N + 1))) / iv.pi ** k


def _b_interval(N: int, M: int):
    a = _a_interval(N)
    coef = Fraction((N + 1) ** 2 * math.factorial(M + 2) * math.factorial(M + 3) ** 2, 192)
    rec = iv.mpf(486 * (N + 1) ** 6) * a * a
    return _iv(coef) * a * rec ** (M - 1)


def a_constant(N: int, prec: int = DEFAULT_PREC) -> BoundValue:
    """The field constant ``A(N)`` for the rationals.

    ``A(1) = 4`` and ``A(2) = 96 / pi``.
    """
    if N < 1:
        raise PreconditionError(f"A(N) needs N >= 1, got {N}")
    with _precision(prec):
        return BoundValue._from_interval(_a_interval(N), prec)


def b_constant(N: int, M: int, prec: int = DEFAULT_PREC) -> BoundValue:
    if N < 1 or M < 1:
        raise PreconditionError(f"B(N, M) needs N, M >= 1, got N={N}, M={M}")
    with _precision(prec):
        return BoundValue._from_interval(_b_interval(N, M), prec)


def _pow(base: Rational, exponent: Fraction):
    """Interval enclosure of ``base ** exponent`` for rational ``base >= 1``."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base == 1 or exponent == 0:
        return iv.mpf(1)
    if exponent.denominator == 1:
        return _iv(base ** exponent.numerator)
    if exponent.denominator == 2:
        return iv.sqrt(_iv(base ** exponent.numerator))
    return iv.exp(iv.log(_iv(base)) * exponent.numerator / exponent.denominator)


def _min_term(hF: int, hL: int, N: int):
    """``min(H(F)^(1/2), H(L)^N)`` with the comparison done exactly."""
    if hF <= hL ** (2 * N):
        return _pow(hF, Fraction(1, 2)), "F"
    return _iv(hL ** N), "L"


def zero_search_radius(N: int, hF: int, prec: int = DEFAULT_PREC) -> int:
    """Integer ceiling of ``A(N) * H(F)^(N/2)``."""
    with _precision(prec):
        v = BoundValue._from_interval(_a_interval(N) * _pow(hF, Fraction(N, 2)), prec)
    return math.ceil(v.hi)


def single_bound(N: int, hF: int, hL: int, prec: int = DEFAULT_PREC) -> BoundValue:
    """``18 (N+1)^2 A(N) H(F)^((N+1)/2) min(H(F)^(1/2), H(L)^N)``."""
    with _precision(prec):
        m, _ = _min_term(hF, hL, N)
        x = iv.mpf(18 * (N + 1) ** 2) * _a_interval(N) * _pow(hF, Fraction(N + 1, 2)) * m
        return BoundValue._from_interval(x, prec)


@dataclass
class BoundReport:
    N: int
    M: int
    height_F: int
    heights_L: List[int]
    bound_13: BoundValue
    bound_14: BoundValue
    bound_15: BoundValue
    bound_star: BoundValue
    bound_product: BoundValue
    bound_216: Optional[BoundValue]
    M_values: List[BoundValue]
    M_sources: List[str]
    star_order: List[int] = field(default_factory=list)

    def named(self) -> Dict[str, BoundValue]:
        out = {
            "bound_13": self.bound_13,
            "bound_14": self.bound_14,
            "bound_15": self.bound_15,
            "bound_product": self.bound_product,
            "bound_star": self.bound_star,
        }
        if self.bound_216 is not None:
            out["bound_216"] = self.bound_216
        return out


def star_order(N: int, hF: int, heights_L: Sequence[int]) -> List[int]:
    """Form order putting the largest ``min(H(F)^(1/2), H(L_i)^N)`` first.

    The comparison is exact (on squares), and ties keep the input order.
    """

    def key(i):
        hL = heights_L[i]
        # compare via squares: min(hF, hL^(2N))
        return min(Fraction(hF), Fraction(hL) ** (2 * N))

    idx = list(range(len(heights_L)))
    best = max(idx, key=lambda i: (key(i), -i))
    return [best] + [i for i in idx if i != best]


def bounds_from_heights(N: int, hF: int, heights_L: Sequence[int], prec: int = DEFAULT_PREC) -> BoundReport:
    """Evaluate every height bound from exact form heights."""
    M = len(heights_L)
    if N < 1 or M < 1:
        raise PreconditionError(f"bounds need N >= 1 and at least one linear form (N={N}, M={M})")
    if hF < 1 or any(h < 1 for h in heights_L):
        raise PreconditionError("heights of nonzero forms are at least 1")
    order = star_order(N, hF, heights_L)
    with _precision(prec):
        B = _b_interval(N, M)
        base = Fraction(N + 1, 2) + (M - 1) * (N + 2)
        terms = [_min_term(hF, hL, N) for hL in heights_L]
        m_vals = [t[0] for t in terms]

        b13 = B * _pow(hF, Fraction(N + 2 * M, 2) + (M - 1) * (N + 2))
        prodL14 = iv.mpf(1)
        prodL15 = iv.mpf(1)
        for hL in heights_L:
            prodL14 = prodL14 * _pow(hL, Fraction((2 * M - 1) * N, M))
            prodL15 = prodL15 * _pow(hL, Fraction((2 * M - 1) * N, 2 * M))
        b14 = B * _pow(hF, base) * prodL14
        b15 = B * _pow(hF, Fraction(2 * N + 2 * M + 1, 4) + (M - 1) * (N + 2)) * prodL15

        star = B * _pow(hF, base) * m_vals[order[0]]
        for i in order[1:]:
            star = star * m_vals[i] * m_vals[i]
        prod41 = iv.mpf(1)
        e = Fraction(2 * M - 1, M)
        for i, hL in enumerate(heights_L):
            if terms[i][1] == "F":
                prod41 = prod41 * _pow(hF, e / 2)
            else:
                prod41 = prod41 * _pow(hL, e * N)
        b_product = B * _pow(hF, base) * prod41

        rep = BoundReport(
            N=N,
            M=M,
            height_F=hF,
            heights_L=list(heights_L),
            bound_13=BoundValue._from_interval(b13, prec),
            bound_14=BoundValue._from_interval(b14, prec),
            bound_15=BoundValue._from_interval(b15, prec),
            bound_star=BoundValue._from_interval(star, prec),
            bound_product=BoundValue._from_interval(b_product, prec),
            bound_216=None,
            M_values=[BoundValue._from_interval(m, prec) for m in m_vals],
            M_sources=[t[1] for t in terms],
            star_order=order,
        )
    if M == 1:
        rep.bound_216 = single_bound(N, hF, heights_L[0], prec)
    return rep


def evaluate_bounds(F: QuadraticForm, Ls: Sequence[LinearForm], prec: int = DEFAULT_PREC) -> BoundReport:
    if not Ls:
        raise PreconditionError("at least one linear form is required")
    for L in Ls:
        if L.dim != F.dim:
            raise PreconditionError(f"linear form in {L.dim} variables for a form in {F.dim} variables")
    N = F.dim - 1
    return bounds_from_heights(N, form_height(F), [form_height(L) for L in Ls], prec)
