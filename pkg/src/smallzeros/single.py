"""Zeros of a quadratic form off one hyperplane.

Given ``F`` and a linear form ``L`` for which some zero of ``F`` has
``L != 0``, :func:`solve_single` builds such a zero with

    h(u) <= 18 (N+1)^2 A(N) H(F)^((N+1)/2) min(H(F)^(1/2), H(L)^N).

The construction: take the first small zero
``x`` of ``F``; if ``L(x) != 0`` it is the answer. Otherwise also find a
small zero ``y`` inside the hyperplane ``L = 0`` (through the form ``G``
obtained by eliminating one variable), move each of ``x`` and ``y`` off
the hyperplane by a reflection ``u = F(t) w - 2 F(t, w) t`` with a
0/±1 vector ``t``, and keep the smaller result. Singular points are handled
by dropping one variable and recursing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .arith import (
    LinearForm,
    QuadraticForm,
    RationalVector,
    basis_vector,
    canonical_rep,
    combine,
    is_zero_vector,
    vector,
)
from .errors import (
    AnisotropicError,
    DimensionError,
    NoSolutionError,
    PreconditionError,
    SearchTruncated,
    ZeroFormError,
)
from .heights import form_height, homogeneous_height, inhomogeneous_height
from .lattice import order_key
from .zeros import DEFAULT_MAX_POINTS, is_singular_point, search_zero

DEFAULT_WITNESS_CAP = 50


class Path(str, enum.Enum):
    BASE_N1 = "BaseN1"
    DIRECT_ZERO = "DirectZero"
    REFLECT_X = "ReflectX"
    REFLECT_Y = "ReflectY"
    SINGULAR_REDUCTION = "SingularReduction"


@dataclass
class SingleSolution:
    point: RationalVector
    path: Path
    x: Optional[RationalVector] = None
    y: Optional[RationalVector] = None
    G: Optional[QuadraticForm] = None
    t: Optional[RationalVector] = None
    pivot: Optional[int] = None
    # singular reduction: which point was singular, and the dropped index
    reduced_from: Optional[str] = None
    dropped_index: Optional[int] = None
    sub: Optional["SingleSolution"] = None
    candidates: dict = field(default_factory=dict)

    def trace(self) -> dict:
        out = {"path": self.path.value}
        if self.pivot is not None:
            out["pivot"] = self.pivot
        if self.reduced_from is not None:
            out["reduced_from"] = self.reduced_from
            out["dropped_index"] = self.dropped_index
        if self.candidates:
            out["candidate_heights"] = dict(self.candidates)
        if self.sub is not None:
            out["sub"] = self.sub.trace()
        return out


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def binary_zeros(F: QuadraticForm) -> List[RationalVector]:
    """Projective zeros of a binary form, canonical and in scan order."""
    if F.dim != 2:
        raise DimensionError("binary_zeros needs a form in two variables")
    if F.is_zero():
        raise ZeroFormError("the zero form vanishes everywhere")
    (a, b), (_, c) = F.entries
    if a == 0 and c == 0:
        pts = [(1, 0), (0, 1)]
    elif a != 0:
        disc = b * b - a * c
        root = rational_sqrt(disc)
        if root is None:
            raise AnisotropicError(f"{F} has no rational zero (discriminant {4 * disc} is not a square)")
        pts = [((-b + root) / a, 1), ((-b - root) / a, 1)]
    else:
        # F = X1 (2 b X0 + c X1)
        pts = [(1, 0), (c, -2 * b)]
    reps = {canonical_rep(p) for p in pts}
    return [vector(p) for p in sorted(reps, key=order_key)]


def solve_base_n1(F: QuadraticForm, L: LinearForm) -> RationalVector:
    """Two-variable case: one of the at most two projective zeros avoids ``L``.

    The zero is returned as a primitive integer vector; its height is at
    most ``3 H(F)``.
    """
    if F.dim != 2 or L.dim != 2:
        raise DimensionError("solve_base_n1 works in two variables")
    if L.is_zero():
        raise ZeroFormError("linear form is identically zero")
    for z in binary_zeros(F):
        if L(z) != 0:
            return z
    raise NoSolutionError(f"every zero of {F} lies on {L} = 0")


def reduce_by_linear(F: QuadraticForm, L: LinearForm, pivot: int) -> QuadraticForm:
    """Restrict ``F`` to the hyperplane ``L = 0`` by eliminating ``X_pivot``.

    With ``p`` the pivot, ``q`` the coefficients of ``L`` and ``i, j != p``::

        g_ij = f_ij - (q_j f_pi + q_i f_pj) / q_p + f_pp q_i q_j / q_p^2

    (the symmetrised form of the elimination), so ``x`` is a zero of ``F``
    on ``L = 0`` exactly when ``x`` with the pivot coordinate deleted is a
    zero of ``G``.
    """
    if F.dim != L.dim:
        raise DimensionError(f"form in {F.dim} variables, linear form in {L.dim}")
    q = L.coeffs
    p = pivot
    if q[p] == 0:
        raise PreconditionError(f"pivot coefficient q_{p} is zero")
    f = F.entries
    qp = q[p]
    idx = [i for i in range(F.dim) if i != p]
    rows = []
    for i in idx:
        rows.append(tuple(
            f[i][j] - (q[j] * f[p][i] + q[i] * f[p][j]) / qp + f[p][p] * q[i] * q[j] / (qp * qp)
            for j in idx
        ))
    return QuadraticForm(tuple(rows))


def lift_through_linear(z: Sequence, L: LinearForm, pivot: int) -> RationalVector:
    """Insert the pivot coordinate so that ``L`` vanishes on the result."""
    q = L.coeffs
    if len(z) != L.dim - 1:
        raise DimensionError(f"expected {L.dim - 1} coordinates, got {len(z)}")
    if q[pivot] == 0:
        raise PreconditionError(f"pivot coefficient q_{pivot} is zero")
    zs = list(vector(z))
    others = [i for i in range(L.dim) if i != pivot]
    yp = -sum((q[i] * c for i, c in zip(others, zs)), Fraction(0)) / q[pivot]
    return tuple(zs[:pivot] + [yp] + zs[pivot:])


def select_t(F: QuadraticForm, w: Sequence, L: LinearForm) -> RationalVector:
    """A 0/±1 vector ``t`` with ``L(t) != 0`` and ``F(t, w) != 0``.

    Needs ``w`` nonsingular; tries the basis vector at the pivot of ``L``,
    then a basis vector not orthogonal to ``w``, then their sum.
    """
    if is_singular_point(F, w):
        raise PreconditionError("select_t needs a nonsingular point")
    n = F.dim
    Fw = F.apply(w)
    i = L.pivot()
    if Fw[i] != 0:
        return basis_vector(n, i)
    j = next(k for k, c in enumerate(Fw) if c != 0)
    if L.coeffs[j] != 0:
        return basis_vector(n, j)
    return combine(1, basis_vector(n, i), 1, basis_vector(n, j))


def reflect(F: QuadraticForm, t: Sequence, w: Sequence) -> RationalVector:
    """``u = F(t) w - 2 F(t, w) t``.

    ``F(u) = F(t)^2 F(w)`` identically, so ``u`` is a zero whenever ``w``
    is. The result is the zero vector when ``F(t) = F(t, w) = 0``; callers
    decide what that means.
    """
    return combine(F(t), w, -2 * F(t, w), t)


def _drop(v: Sequence, index: int) -> RationalVector:
    return tuple(v[:index]) + tuple(v[index + 1:])


def _check_witness(F: QuadraticForm, Ls: Sequence[LinearForm], t) -> RationalVector:
    t = vector(t)
    if len(t) != F.dim:
        raise DimensionError(f"witness has {len(t)} coordinates, form has {F.dim} variables")
    if F(t) != 0:
        raise PreconditionError(f"witness {t} is not a zero of F")
    for L in Ls:
        if L(t) == 0:
            raise PreconditionError(f"witness {t} lies on {L} = 0")
    return t


def _zero_within(F: QuadraticForm, known) -> RationalVector:
    """First zero of ``F`` in scan order, given that ``known`` is one."""
    res = search_zero(F, homogeneous_height(known), None)
    if res.point is None:
        raise AssertionError(f"search missed the zero {known} of {F}")
    return res.point


def _singular(F0: QuadraticForm, L: LinearForm, x: RationalVector, t: RationalVector,
              reduced_from: str) -> SingleSolution:
    n = F0.dim
    if n == 2:
        return SingleSolution(solve_base_n1(F0, L), Path.BASE_N1)
    if is_zero_vector(x):
        raise PreconditionError("singular reduction needs a nonzero point")
    if not is_singular_point(F0, x):
        raise PreconditionError(f"{x} is not a singular point of F")
    if L(x) != 0:
        raise PreconditionError(f"L does not vanish at {x}")
    _check_witness(F0, [L], t)
    m = max(i for i, c in enumerate(x) if c != 0)
    ratio = t[m] / x[m]
    w = _drop(tuple(ti - ratio * xi for ti, xi in zip(t, x)), m)
    Q = F0.drop(m)
    L1 = L.drop(m)
    sub = _solve(Q.primitive(), L1, w)
    u = sub.point
    s = tuple(u[:m]) + (Fraction(0),) + tuple(u[m:])
    assert F0(s) == 0 and L(s) != 0
    return SingleSolution(s, Path.SINGULAR_REDUCTION, x=x, reduced_from=reduced_from,
                          dropped_index=m, sub=sub)


def singular_reduction(F: QuadraticForm, L: LinearForm, x: Sequence, witness: Sequence) -> RationalVector:
    """Zero ``s`` of ``F`` with ``L(s) != 0``, starting from a singular zero ``x``.

    The index ``m`` dropped is the last one with ``x_m != 0``. Because ``x``
    spans the kernel direction, ``F`` only depends on the other coordinates,
    and the witness ``t`` maps to ``w_i = t_i - (t_m / x_m) x_i``.
    """
    if F.is_zero():
        raise ZeroFormError("quadratic form is identically zero")
    return _singular(F.primitive(), L, vector(x), vector(witness), "x").point


def _solve(F0: QuadraticForm, L: LinearForm, t: RationalVector) -> SingleSolution:
    n = F0.dim
    if n == 1:
        raise NoSolutionError("a nonzero form in one variable has no nontrivial zero")
    if n == 2:
        return SingleSolution(solve_base_n1(F0, L), Path.BASE_N1)
    x = _zero_within(F0, t)
    if L(x) != 0:
        return SingleSolution(x, Path.DIRECT_ZERO, x=x)
    if is_singular_point(F0, x):
        return _singular(F0, L, x, t, "x")

    t1 = select_t(F0, x, L)
    u1 = reflect(F0, t1, x)

    p = L.pivot()
    G = reduce_by_linear(F0, L, p)
    if G.is_zero():
        # F vanishes on the whole hyperplane L = 0
        z = basis_vector(n - 1, 0)
    else:
        z = _zero_within(G.primitive(), _drop(x, p))
    y = lift_through_linear(z, L, p)

    if is_singular_point(F0, y):
        second = _singular(F0, L, y, t, "y")
        u2, t2 = second.point, None
    else:
        t2 = select_t(F0, y, L)
        u2 = reflect(F0, t2, y)
        second = None

    h1, h2 = inhomogeneous_height(u1), inhomogeneous_height(u2)
    cands = {"u1": h1, "u2": h2}
    if h1 <= h2:
        sol = SingleSolution(u1, Path.REFLECT_X, x=x, y=y, G=G, t=t1, pivot=p, candidates=cands)
    elif second is not None:
        second.y, second.G, second.pivot, second.candidates = y, G, p, cands
        second.x = x
        sol = second
    else:
        sol = SingleSolution(u2, Path.REFLECT_Y, x=x, y=y, G=G, t=t2, pivot=p, candidates=cands)
    assert F0(sol.point) == 0 and L(sol.point) != 0
    return sol


def solve_single(F: QuadraticForm, L: LinearForm, witness: Optional[Sequence] = None,
                 cap: int = DEFAULT_WITNESS_CAP,
                 max_points: Optional[int] = DEFAULT_MAX_POINTS) -> SingleSolution:
    """Zero of ``F`` off the hyperplane ``L = 0`` within the single-form bound.

    ``witness`` is any zero ``t`` with ``L(t) != 0``. If omitted, the oracle
    looks for one within sup-norm ``cap``; failing that the outcome is
    ``SearchTruncated`` (unknown).
    """
    from .oracle import find_witness

    if F.dim != L.dim:
        raise DimensionError(f"form in {F.dim} variables, linear form in {L.dim}")
    if F.is_zero():
        raise ZeroFormError("quadratic form is identically zero")
    if L.is_zero():
        raise ZeroFormError("linear form is identically zero")
    F0 = F.primitive()
    if F0.dim == 2:
        sol = SingleSolution(solve_base_n1(F0, L), Path.BASE_N1)
        assert F(sol.point) == 0 and L(sol.point) != 0
        return sol
    if witness is None:
        t = find_witness(F0, [L], cap, max_points)
        if t is None:
            raise SearchTruncated(f"no witness within sup-norm {cap}")
    else:
        t = _check_witness(F0, [L], witness)
    sol = _solve(F0, L, t)
    assert F(sol.point) == 0 and L(sol.point) != 0
    return sol


def solution_height(sol: SingleSolution) -> int:
    return inhomogeneous_height(sol.point)


def primitive_height_inputs(F: QuadraticForm, L: LinearForm):
    return form_height(F), form_height(L)
