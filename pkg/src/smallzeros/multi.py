"""Zeros of a quadratic form off several hyperplanes, by induction on their number.

With ``M >= 2`` linear forms, the solver recursively gets ``x`` avoiding
the first ``M - 1`` hyperplanes and ``y`` avoiding the last one (both
from the same witness), and then merges them:

* if ``x`` or ``y`` already avoids every hyperplane it is returned;
* if ``F(x, y) = 0`` the whole line ``x + beta y`` lies on the quadric and a
  small ``beta`` with the right sign avoids all hyperplanes (``Case1``);
* otherwise a small point ``w`` off all hyperplanes is fetched; either
  ``F(w) = 0`` (``WZero``) or the reflection of ``x`` through
  ``v = y +- beta w`` works for a small ``beta`` (``Case2``).

The forms are first reordered so the one with the largest
``min(H(F)^(1/2), H(L_i)^N)`` comes first, which is what makes the
stronger product bound hold.

Two degenerate situations are not covered by the counting argument for
``Case2``: when ``F`` factors as a product of two rational linear forms,
the zero set is a pair of hyperplanes and a point is picked on one of them
directly (``SplitForm``); otherwise some other small ``w`` makes the
counting argument work and a slightly larger box is searched for it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import LinearForm, QuadraticForm, RationalVector, combine, format_rational, primitive_rep, vector
from .constants import bounds_from_heights, single_bound, star_order
from .errors import DimensionError, PreconditionError, SearchTruncated, ZeroFormError
from .heights import form_height, inhomogeneous_height
from .lattice import linear_values, quadratic_values, scan
from .nonvanishing import box_radius, nonvanishing_point_linear
from .single import (
    DEFAULT_WITNESS_CAP,
    SingleSolution,
    _check_witness,
    _solve,
    lift_through_linear,
)
from .zeros import DEFAULT_MAX_POINTS


class Case(str, enum.Enum):
    BASE = "Base"
    X_ALL = "XSatisfiesAll"
    Y_ALL = "YSatisfiesAll"
    CASE1 = "Case1"
    CASE2 = "Case2"
    W_ZERO = "WZero"
    SPLIT = "SplitForm"


def _vec_str(v) -> Optional[List[str]]:
    return None if v is None else [format_rational(c) for c in v]


@dataclass
class Level:
    M: int
    case: Case
    forms: List[int]
    point: RationalVector
    k: Optional[int] = None
    beta: Optional[int] = None
    sign: Optional[int] = None
    x: Optional[RationalVector] = None
    y: Optional[RationalVector] = None
    w: Optional[RationalVector] = None
    alt_w: bool = False
    beta_exceeds: bool = False
    checks: Dict[str, Optional[bool]] = field(default_factory=dict)
    single: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"M": self.M, "case": self.case.value, "forms": list(self.forms),
               "point": _vec_str(self.point), "h_u": inhomogeneous_height(self.point)}
        for name in ("x", "y", "w"):
            v = getattr(self, name)
            if v is not None:
                out[name] = _vec_str(v)
                out[f"h_{name}"] = inhomogeneous_height(v)
        for name in ("k", "beta", "sign"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.alt_w:
            out["alt_w"] = True
        if self.beta_exceeds:
            out["beta_exceeds_M_plus_2"] = True
        if self.checks:
            out["checks"] = dict(self.checks)
        if self.single is not None:
            out["single"] = self.single
        return out


@dataclass
class MultiSolution:
    point: RationalVector
    order: List[int]
    levels: List[Level]

    @property
    def case(self) -> Case:
        return self.levels[-1].case

    def trace(self) -> List[dict]:
        return [lv.to_dict() for lv in self.levels]


def find_beta_case1(x, y, Ls: Sequence[LinearForm], limit: Optional[int] = None) -> Tuple[int, int]:
    """Least ``beta`` (``+`` before ``-``) with every ``L_i(x +- beta y) != 0``."""
    lx = [L(x) for L in Ls]
    ly = [L(y) for L in Ls]
    limit = len(Ls) + 1 if limit is None else limit
    for beta in range(1, limit + 1):
        for sign in (1, -1):
            if all(a + sign * beta * b != 0 for a, b in zip(lx, ly)):
                return beta, sign
    raise PreconditionError("no admissible beta; x, y do not have the required pattern")


def combine_case1(F: QuadraticForm, x, y, Ls: Sequence[LinearForm]) -> Tuple[RationalVector, int, int]:
    """``u = x +- beta y`` for ``x, y`` isotropic with ``F(x, y) = 0``."""
    if F(x) != 0 or F(y) != 0:
        raise PreconditionError("x and y must be zeros of F")
    if F(x, y) != 0:
        raise PreconditionError("Case1 needs F(x, y) = 0")
    beta, sign = find_beta_case1(x, y, Ls)
    u = combine(1, x, sign * beta, y)
    assert F(u) == 0 and all(L(u) != 0 for L in Ls)
    return u, beta, sign


def _case2_point(F: QuadraticForm, x, y, w, beta: int, sign: int):
    v = combine(1, y, sign * beta, w)
    Fv = F(v)
    Fxv = F(x, v)
    if Fv == 0 or Fxv == 0:
        return None, v
    return combine(Fv, x, -2 * Fxv, v), v


def combine_case2(F: QuadraticForm, x, y, w, Ls: Sequence[LinearForm],
                  limit: Optional[int] = None) -> Tuple[RationalVector, int, int]:
    """Reflect ``x`` through ``v = y +- beta w``: ``u = F(v) x - 2 F(x, v) v``.

    Scans ``beta = 1, 2, ...`` (``+`` before ``-``) up to ``2M + 4`` and
    returns the first choice meeting ``F(v) != 0``, ``F(x, v) != 0`` and
    ``L_i(u) != 0`` for all ``i``. Raises :class:`PreconditionError` if
    there is none, which only happens in degenerate configurations.
    """
    if F(x) != 0 or F(y) != 0:
        raise PreconditionError("x and y must be zeros of F")
    if F(x, y) == 0:
        raise PreconditionError("Case2 needs F(x, y) != 0")
    if F(w) == 0 or any(L(w) == 0 for L in Ls):
        raise PreconditionError("w must be off the quadric and off every hyperplane")
    limit = 2 * len(Ls) + 4 if limit is None else limit
    for beta in range(1, limit + 1):
        for sign in (1, -1):
            u, _ = _case2_point(F, x, y, w, beta, sign)
            if u is not None and all(L(u) != 0 for L in Ls):
                assert F(u) == 0
                return u, beta, sign
    raise PreconditionError(f"no admissible beta up to {limit} for w = {tuple(w)}")


def split_factors(F: QuadraticForm, x, y) -> Optional[Tuple[RationalVector, RationalVector]]:
    """Normals of the two planes if ``F(x, y) F = sym(Fx (Fy)^T)``, else ``None``."""
    a = F(x, y)
    Fx, Fy = F.apply(x), F.apply(y)
    n = F.dim
    for i in range(n):
        for j in range(n):
            if a * F.entries[i][j] != Fx[i] * Fy[j] + Fy[i] * Fx[j]:
                return None
    return Fx, Fy


def point_on_plane(normal: Sequence, Ls: Sequence[LinearForm]) -> Optional[RationalVector]:
    """Small primitive point on ``normal . X = 0`` avoiding every ``L_i``, if any."""
    P = LinearForm(vector(normal))
    p = P.pivot()
    n = P.dim
    qp = P.coeffs[p]
    reduced = []
    for L in Ls:
        c = [L.coeffs[j] - L.coeffs[p] * P.coeffs[j] / qp for j in range(n) if j != p]
        R = LinearForm(tuple(c))
        if R.is_zero():
            return None
        reduced.append(R)
    z = nonvanishing_point_linear(reduced)
    u = lift_through_linear(z, P, p)
    return vector(primitive_rep(u))


def _alternative_w(F: QuadraticForm, x, y, Ls: Sequence[LinearForm]):
    """Scan a box one larger for a ``w`` that makes ``Case2`` (or ``WZero``) work."""
    qs = [primitive_rep(L.coeffs) for L in Ls]
    for _, chunk in scan(F.dim, box_radius(len(Ls) + 2)):
        mask = np.ones(len(chunk), dtype=bool)
        for q in qs:
            mask &= linear_values(q, chunk) != 0
        for row in chunk[mask]:
            w = tuple(Fraction(int(c)) for c in row)
            if F(w) == 0:
                return Case.W_ZERO, w, None, None, w
            try:
                u, beta, sign = combine_case2(F, x, y, w, Ls)
            except PreconditionError:
                continue
            return Case.CASE2, u, beta, sign, w
    raise AssertionError("no usable auxiliary point in the enlarged box")


class _Solver:
    def __init__(self, F0: QuadraticForm, t: RationalVector, heights_L: Sequence[int]):
        self.F0 = F0
        self.t = t
        self.N = F0.dim - 1
        self.hF = form_height(F0)
        self.heights_L = list(heights_L)
        self.levels: List[Level] = []

    def _bookkeeping(self, lv: Level, idx: Sequence[int]):
        hs = [self.heights_L[i] for i in idx]
        if lv.x is not None:
            lv.checks["x_bound"] = bounds_from_heights(self.N, self.hF, hs[:-1]).bound_star.check(
                inhomogeneous_height(lv.x))
        if lv.y is not None:
            lv.checks["y_bound"] = single_bound(self.N, self.hF, hs[-1]).check(inhomogeneous_height(lv.y))

    def run(self, Ls: Sequence[LinearForm], idx: Sequence[int]) -> RationalVector:
        F = self.F0
        M = len(Ls)
        if M == 1:
            sol: SingleSolution = _solve(F, Ls[0], self.t)
            self.levels.append(Level(1, Case.BASE, list(idx), sol.point, single=sol.trace()))
            return sol.point
        x = self.run(Ls[:-1], idx[:-1])
        y = _solve(F, Ls[-1], self.t).point
        lv = Level(M, Case.BASE, list(idx), x, x=x, y=y)
        self._bookkeeping(lv, idx)
        self.levels.append(lv)
        if Ls[-1](x) != 0:
            lv.case, lv.point = Case.X_ALL, x
            return x
        if all(L(y) != 0 for L in Ls[:-1]):
            lv.case, lv.point = Case.Y_ALL, y
            return y
        shared = [i for i in range(M - 1) if Ls[i](y) != 0]
        rest = [i for i in range(M - 1) if Ls[i](y) == 0]
        lv.k = len(shared)
        lv.forms = [idx[i] for i in shared + rest] + [idx[-1]]
        hx, hy = inhomogeneous_height(x), inhomogeneous_height(y)
        if F(x, y) == 0:
            u, beta, sign = combine_case1(F, x, y, Ls)
            lv.case, lv.point, lv.beta, lv.sign = Case.CASE1, u, beta, sign
            lv.checks["beta_range"] = beta <= (M - 2) // 2 + 1
            lv.checks["height_chain"] = inhomogeneous_height(u) <= (beta + 1) * hx * hy
            return u
        w = nonvanishing_point_linear(Ls)
        lv.w = w
        if F(w) == 0:
            lv.case, lv.point = Case.W_ZERO, w
            return w
        try:
            u, beta, sign = combine_case2(F, x, y, w, Ls)
        except PreconditionError:
            planes = split_factors(F, x, y)
            if planes is not None:
                for normal in planes:
                    u = point_on_plane(normal, Ls)
                    if u is not None:
                        break
                else:
                    raise AssertionError("both planes of a split form lie inside some hyperplane")
                assert F(u) == 0 and all(L(u) != 0 for L in Ls)
                lv.case, lv.point = Case.SPLIT, u
                return u
            case, u, beta, sign, w = _alternative_w(F, x, y, Ls)
            lv.alt_w, lv.w = True, w
            if case is Case.W_ZERO:
                lv.case, lv.point = case, u
                return u
        lv.case, lv.point, lv.beta, lv.sign = Case.CASE2, u, beta, sign
        lv.beta_exceeds = beta > M + 2
        v = combine(1, y, sign * beta, lv.w)
        N1 = (self.N + 1) ** 2
        hu = inhomogeneous_height(u)
        lv.checks["height_chain"] = hu <= 3 * N1 * self.hF * hx * inhomogeneous_height(v) ** 2
        lv.checks["height_chain_coarse"] = (
            2 * hu <= 3 * N1 * (M + 2) * (M + 3) ** 2 * self.hF * hx * hy ** 2)
        return u


def solve_multi(F: QuadraticForm, Ls: Sequence[LinearForm], witness: Optional[Sequence] = None,
                cap: int = DEFAULT_WITNESS_CAP,
                max_points: Optional[int] = DEFAULT_MAX_POINTS) -> MultiSolution:
    """Zero ``u`` of ``F`` with ``L_i(u) != 0`` for every ``i``.

    ``witness`` is a point with the same property; without one the oracle
    searches up to sup-norm ``cap`` and raises :class:`SearchTruncated` when
    nothing turns up.
    """
    from .oracle import find_witness

    Ls = list(Ls)
    if not Ls:
        raise PreconditionError("at least one linear form is required")
    if F.is_zero():
        raise ZeroFormError("quadratic form is identically zero")
    for L in Ls:
        if L.dim != F.dim:
            raise DimensionError(f"linear form in {L.dim} variables for a form in {F.dim} variables")
        if L.is_zero():
            raise ZeroFormError("a linear form is identically zero")
    F0 = F.primitive()
    if witness is None:
        t = find_witness(F0, Ls, cap, max_points)
        if t is None:
            raise SearchTruncated(f"no witness within sup-norm {cap}")
    else:
        t = _check_witness(F0, Ls, witness)
    heights_L = [form_height(L) for L in Ls]
    order = star_order(F0.dim - 1, form_height(F0), heights_L)
    solver = _Solver(F0, t, heights_L)
    u = solver.run([Ls[i] for i in order], order)
    assert F(u) == 0 and all(L(u) != 0 for L in Ls)
    return MultiSolution(u, order, solver.levels)
