"""Weil heights over the rationals.

Over Q the product over places collapses: the finite places contribute the
content (gcd / common denominator), so both heights can be read off a
primitive integer representative without factoring anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

from .arith import LinearForm, QuadraticForm, common_denominator, is_zero_vector, primitive_rep, vector
from .errors import ZeroFormError


@dataclass(frozen=True)
class Place:
    name: str
    archimedean: bool
    local_degree: int


@dataclass(frozen=True)
class FieldData:
    """Degree, discriminant and archimedean places of the base field.

    Only the rationals are instantiated; the type carries the data the
    field constant needs so the formulas read the same as in general.
    """

    degree: int
    discriminant: int
    infinite_places: Tuple[Place, ...] = field(default=())

    @property
    def real_places(self):
        return tuple(p for p in self.infinite_places if p.local_degree == 1)

    @property
    def complex_places(self):
        return tuple(p for p in self.infinite_places if p.local_degree == 2)


RATIONALS = FieldData(degree=1, discriminant=1, infinite_places=(Place("inf", True, 1),))


def homogeneous_height(x: Sequence) -> int:
    """``H(x)``: the largest coordinate of a primitive integer representative."""
    if is_zero_vector(x):
        raise ZeroFormError("homogeneous height of the zero vector is undefined")
    return max(abs(a) for a in primitive_rep(x))


def inhomogeneous_height(x: Sequence) -> int:
    """``h(x) = max(b, |a_0|, ..., |a_N|)`` where ``x = a / b`` in lowest terms."""
    v = vector(x)
    b = common_denominator(v)
    return max([b] + [abs(int(c * b)) for c in v])


def form_height(form: Union[QuadraticForm, LinearForm]) -> int:
    if isinstance(form, QuadraticForm):
        coeffs = form.coefficient_vector()
    elif isinstance(form, LinearForm):
        coeffs = form.coeffs
    else:
        raise TypeError(f"expected a quadratic or linear form, got {type(form).__name__}")
    if is_zero_vector(coeffs):
        raise ZeroFormError("height of the zero form is undefined")
    return homogeneous_height(coeffs)

