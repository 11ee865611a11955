"""Small zeros of a single quadratic form.

Isotropy is decided by bounded search alone: an isotropic form always has
a zero of height at most ``A(N) H(F)^(N/2)``, so exhausting that radius
certifies anisotropy. Whichever
search strategy is used lives behind :func:`search_zero`; callers only see
the first zero in scan order.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .arith import QuadraticForm, RationalVector, is_zero_vector
from .constants import a_constant, zero_search_radius
from .errors import AnisotropicError, DimensionError, NoSolutionError, PreconditionError, SearchTruncated, ZeroFormError
from .heights import form_height
from .lattice import quadratic_values, scan

DEFAULT_MAX_POINTS = 10 ** 6


@dataclass(frozen=True)
class ZeroSearch:
    point: Optional[RationalVector]
    status: str  # "found", "anisotropic" or "truncated"
    radius: int  # last shell fully examined
    theory_radius: int
    points: int


@functools.lru_cache(maxsize=4096)
def search_zero(F: QuadraticForm, cap: Optional[int] = None,
                max_points: Optional[int] = DEFAULT_MAX_POINTS) -> ZeroSearch:
    """Scan primitive vectors shell by shell for the first zero of ``F``.

    The radius is ``min(cap, ceil(A(N) H(F)^(N/2)))``. ``max_points`` bounds
    the work; hitting it yields status ``"truncated"``.
    """
    if F.is_zero():
        raise ZeroFormError("search_zero needs a nonzero form")
    N = F.dim - 1
    if N == 0:
        # a*X0^2 with a != 0 has no nontrivial zero
        return ZeroSearch(None, "anisotropic", 0, 0, 0)
    theory = zero_search_radius(N, form_height(F))
    radius = theory if cap is None else min(cap, theory)
    A = F.integer_matrix()
    seen = 0
    for r, chunk in scan(F.dim, radius):
        hits = np.flatnonzero(quadratic_values(A, chunk) == 0)
        if len(hits):
            v = tuple(Fraction(int(c)) for c in chunk[hits[0]])
            return ZeroSearch(v, "found", r - 1, theory, seen + int(hits[0]) + 1)
        seen += len(chunk)
        if max_points is not None and seen > max_points:
            return ZeroSearch(None, "truncated", r - 1, theory, seen)
    status = "anisotropic" if radius >= theory else "truncated"
    return ZeroSearch(None, status, radius, theory, seen)


def small_zero(F: QuadraticForm, cap: Optional[int] = None,
               max_points: Optional[int] = DEFAULT_MAX_POINTS) -> Optional[RationalVector]:
    """First primitive zero of ``F`` in scan order, or ``None``.

    ``None`` together with ``cap`` at least the theoretical radius means
    ``F`` is anisotropic over Q; use :func:`search_zero` to tell that apart
    from a truncated search.
    """
    res = search_zero(F, cap, max_points)
    if res.point is not None:
        assert F(res.point) == 0
    return res.point


def is_singular_point(F: QuadraticForm, x) -> bool:
    """True iff ``F(t, x) = 0`` for every ``t``, i.e. ``x`` lies in the kernel."""
    if len(x) != F.dim:
        raise DimensionError(f"form has {F.dim} variables, point has {len(x)}")
    if is_zero_vector(x):
        raise PreconditionError("singularity is only defined for nonzero points")
    return is_zero_vector(F.apply(x))


def nonsingular_search_radius(F: QuadraticForm) -> int:
    N = F.dim - 1
    a = a_constant(N).hi
    c = max(Fraction(3), a)
    hF = form_height(F)
    # ceil(c * hF^(N/2)) computed exactly on the upper enclosure
    if N % 2 == 0:
        return math.ceil(c * hF ** (N // 2))
    return math.ceil(c * hF ** (N // 2) * (math.isqrt(hF) + 1))


def nonsingular_small_zero(F: QuadraticForm, cap: Optional[int] = None,
                           witness_cap: Optional[int] = None) -> RationalVector:
    """A nonsingular zero ``s`` with ``H(s) <= max(3, A(N)) H(F)^(N/2)``.

    If the first small zero is singular, a gradient ``dF/dX_i`` that does
    not vanish at some nonsingular zero serves as the linear condition for
    the singular reduction, whose output is then nonsingular.
    """
    from .oracle import find_nonsingular_zero
    from .single import singular_reduction

    if F.is_zero():
        raise ZeroFormError("nonsingular_small_zero needs a nonzero form")
    F0 = F.primitive()
    res = search_zero(F0, cap)
    if res.point is None:
        if res.status == "anisotropic":
            raise AnisotropicError(f"{F} has no nontrivial rational zero")
        raise SearchTruncated(f"no zero of {F} within radius {res.radius}")
    x = res.point
    if not is_singular_point(F0, x):
        return x
    radius = nonsingular_search_radius(F0) if witness_cap is None else witness_cap
    budget = None if witness_cap is not None else 10 * DEFAULT_MAX_POINTS
    t = find_nonsingular_zero(F0, radius, max_points=budget)
    if t is None:
        if radius >= nonsingular_search_radius(F0):
            raise NoSolutionError(f"every zero of {F} is singular")
        raise SearchTruncated(f"no nonsingular zero of {F} within radius {radius}")
    Ft = F0.apply(t)
    i = next(k for k, c in enumerate(Ft) if c != 0)
    s = singular_reduction(F0, F0.gradient(i), x, t)
    assert F0(s) == 0 and not is_singular_point(F0, s)
    return s
