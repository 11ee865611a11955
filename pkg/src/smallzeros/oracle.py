"""Brute-force ground truth by exhaustive shell enumeration.

This module is deliberately simple: it walks primitive integer vectors in
the scan order of :mod:`smallzeros.lattice` and tests each one exactly. It
is used to find witnesses, to certify emptiness at tiny sizes, and to check
that the constructive solvers never beat the true minimum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .arith import LinearForm, QuadraticForm, RationalVector, primitive_rep
from .errors import DimensionError, SearchTruncated
from .lattice import linear_values, quadratic_values, scan


def _int_matrix(F: QuadraticForm):
    if F.is_zero():
        return tuple((0,) * F.dim for _ in range(F.dim))
    return F.integer_matrix()


def _int_forms(F: QuadraticForm, Ls: Sequence[LinearForm]):
    for L in Ls:
        if L.dim != F.dim:
            raise DimensionError(f"linear form in {L.dim} variables for a form in {F.dim} variables")
    return [primitive_rep(L.coeffs) if not L.is_zero() else (0,) * L.dim for L in Ls]


def first_match(F: QuadraticForm, Ls: Sequence[LinearForm], cap: int,
                max_points: Optional[int] = None, nonsingular: bool = False) -> Optional[np.ndarray]:
    """First vector in scan order with ``F = 0`` and every ``L != 0``.

    With ``nonsingular=True`` the vector must also satisfy ``F x != 0``.
    Raises :class:`SearchTruncated` if ``max_points`` is exhausted first.
    """
    A = _int_matrix(F)
    qs = _int_forms(F, Ls)
    seen = 0
    for _, chunk in scan(F.dim, cap):
        mask = quadratic_values(A, chunk) == 0
        for q in qs:
            if not mask.any():
                break
            mask &= linear_values(q, chunk) != 0
        if nonsingular and mask.any():
            Ax = np.stack([linear_values(row, chunk) for row in A], axis=1)
            mask &= (Ax != 0).any(axis=1)
        hits = np.flatnonzero(mask)
        if len(hits):
            return chunk[hits[0]]
        seen += len(chunk)
        if max_points is not None and seen > max_points:
            raise SearchTruncated(f"point budget {max_points} exhausted")
    return None


def _to_vector(v) -> RationalVector:
    return tuple(Fraction(int(c)) for c in v)


def find_witness(F: QuadraticForm, Ls: Sequence[LinearForm], cap: int,
                 max_points: Optional[int] = None) -> Optional[RationalVector]:
    """First point of sup-norm ``<= cap`` with ``F = 0`` and all ``L_i != 0``."""
    v = first_match(F, Ls, cap, max_points)
    return None if v is None else _to_vector(v)


def minimal_solution(F: QuadraticForm, Ls: Sequence[LinearForm],
                     cap: int) -> Optional[Tuple[RationalVector, int]]:
    """Least solution (sup-norm, then scan order) together with its height.

    The returned vector is primitive, so its height is its sup-norm.
    """
    v = first_match(F, Ls, cap)
    if v is None:
        return None
    return _to_vector(v), int(np.abs(v).max())


def find_nonsingular_zero(F: QuadraticForm, cap: int,
                          max_points: Optional[int] = None) -> Optional[RationalVector]:
    v = first_match(F, [], cap, max_points, nonsingular=True)
    return None if v is None else _to_vector(v)
