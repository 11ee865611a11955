"""Exact rational vectors, quadratic forms and linear forms.

Everything here is built on :class:`fractions.Fraction`; there is no floating
point anywhere in this module. Vectors are plain tuples of ``Fraction`` so
they are hashable and immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import DimensionError, ZeroFormError

Scalar = Union[int, Fraction]
RationalVector = Tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    # numpy integers and anything else exposing __index__
    if hasattr(value, "__index__"):
        return Fraction(int(value))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` exactly; decimals are rejected."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vector(values: Iterable) -> RationalVector:
    v = tuple(to_fraction(c) for c in values)
    if not v:
        raise DimensionError("vectors must have at least one coordinate")
    return v


def basis_vector(n: int, i: int) -> RationalVector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def is_zero_vector(x: Sequence) -> bool:
    return all(c == 0 for c in x)


def add(x: Sequence, y: Sequence) -> RationalVector:
    _check_same_length(x, y)
    return tuple(to_fraction(a) + to_fraction(b) for a, b in zip(x, y))


def scale(alpha: Scalar, x: Sequence) -> RationalVector:
    a = to_fraction(alpha)
    return tuple(a * to_fraction(c) for c in x)


def combine(alpha: Scalar, x: Sequence, beta: Scalar, y: Sequence) -> RationalVector:
    """Return ``alpha*x + beta*y``."""
    _check_same_length(x, y)
    a, b = to_fraction(alpha), to_fraction(beta)
    return tuple(a * to_fraction(p) + b * to_fraction(q) for p, q in zip(x, y))


def dot(x: Sequence, y: Sequence) -> Fraction:
    _check_same_length(x, y)
    return sum((to_fraction(a) * to_fraction(b) for a, b in zip(x, y)), Fraction(0))


def _check_same_length(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionError(f"length mismatch: {len(x)} vs {len(y)}")


def common_denominator(x: Sequence) -> int:
    return math.lcm(*(to_fraction(c).denominator for c in x))


def primitive_rep(x: Sequence) -> Tuple[int, ...]:
    """Positive multiple of ``x`` with coprime integer coordinates.

    The multiplier is positive, so signs are preserved; use
    :func:`canonical_rep` for a representative that is unique per ray.
    """
    v = vector(x)
    if is_zero_vector(v):
        raise ZeroFormError("the zero vector has no primitive representative")
    d = common_denominator(v)
    ints = [int(c * d) for c in v]
    g = math.gcd(*ints)
    return tuple(a // g for a in ints)


def canonical_rep(x: Sequence) -> Tuple[int, ...]:
    """Primitive representative whose first nonzero coordinate is positive."""
    p = primitive_rep(x)
    for c in p:
        if c != 0:
            return p if c > 0 else tuple(-a for a in p)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class LinearForm:
    """``L(X) = q . X`` with exact rational coefficients."""

    coeffs: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vector(self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.dim:
            raise DimensionError(f"form has {self.dim} variables, point has {len(x)}")
        return dot(self.coeffs, x)

    def is_zero(self) -> bool:
        return is_zero_vector(self.coeffs)

    def pivot(self) -> int:
        """Index of the first nonzero coefficient."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ZeroFormError("linear form is identically zero")

    def drop(self, index: int) -> "LinearForm":
        return LinearForm(self.coeffs[:index] + self.coeffs[index + 1:])

    def primitive(self) -> "LinearForm":
        return LinearForm(primitive_rep(self.coeffs))

    def __str__(self):
        return _linear_str(self.coeffs)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric matrix ``(f_ij)``; ``F(X) = sum_ij f_ij X_i X_j``."""

    entries: Tuple[RationalVector, ...]

    def __post_init__(self):
        rows = tuple(vector(r) for r in self.entries)
        n = len(rows)
        if n == 0:
            raise DimensionError("quadratic form needs at least one variable")
        for r in rows:
            if len(r) != n:
                raise DimensionError("matrix of a quadratic form must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric: entry ({i},{j}) = {rows[i][j]} "
                        f"but ({j},{i}) = {rows[j][i]}"
                    )
        object.__setattr__(self, "entries", rows)

    @classmethod
    def diagonal(cls, *diag) -> "QuadraticForm":
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_polynomial(cls, n: int, coeffs: dict) -> "QuadraticForm":
        """Build from monomial coefficients ``{(i, j): c}`` of ``c X_i X_j``.

        Off-diagonal monomials are split evenly, so ``{(0, 1): 1}`` gives the
        matrix ``[[0, 1/2], [1/2, 0]]``.
        """
        m = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in coeffs.items():
            c = to_fraction(c)
            if i == j:
                m[i][i] += c
            else:
                m[i][j] += c / 2
                m[j][i] += c / 2
        return cls(tuple(tuple(r) for r in m))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __call__(self, x: Sequence, y: Sequence | None = None) -> Fraction:
        if y is None:
            return eval_quadratic(self, x)
        return eval_bilinear(self, x, y)

    def apply(self, x: Sequence) -> RationalVector:
        """Matrix-vector product ``F x``."""
        if len(x) != self.dim:
            raise DimensionError(f"form has {self.dim} variables, point has {len(x)}")
        xs = vector(x)
        return tuple(dot(row, xs) for row in self.entries)

    def coefficient_vector(self) -> RationalVector:
        return tuple(c for row in self.entries for c in row)

    def is_zero(self) -> bool:
        return is_zero_vector(self.coefficient_vector())

    def primitive(self) -> "QuadraticForm":
        """Integer matrix with coprime entries, obtained by a positive rescaling.

        A positive rescaling leaves the zero set, the height and the sign
        pattern untouched.
        """
        flat = primitive_rep(self.coefficient_vector())
        n = self.dim
        return QuadraticForm(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))

    def integer_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """Entries of :meth:`primitive` as Python ints."""
        return tuple(tuple(int(c) for c in row) for row in self.primitive().entries)

    def submatrix(self, keep: Sequence[int]) -> "QuadraticForm":
        return QuadraticForm(tuple(tuple(self.entries[i][j] for j in keep) for i in keep))

    def drop(self, index: int) -> "QuadraticForm":
        return self.submatrix([i for i in range(self.dim) if i != index])

    def gradient(self, i: int) -> LinearForm:
        """``dF/dX_i``, which is ``2 * (row i of F) . X``."""
        return LinearForm(tuple(2 * c for c in self.entries[i]))

    def __str__(self):
        n = self.dim
        terms = {}
        for i in range(n):
            for j in range(i, n):
                c = self.entries[i][j] * (1 if i == j else 2)
                if c:
                    terms[(i, j)] = c
        return _poly2_str(terms) or "0"


def eval_quadratic(F: QuadraticForm, x: Sequence) -> Fraction:
    if len(x) != F.dim:
        raise DimensionError(f"form has {F.dim} variables, point has {len(x)}")
    xs = vector(x)
    total = Fraction(0)
    for i, row in enumerate(F.entries):
        if xs[i] == 0:
            continue
        total += xs[i] * dot(row, xs)
    return total


def eval_bilinear(F: QuadraticForm, x: Sequence, y: Sequence) -> Fraction:
    if len(x) != F.dim or len(y) != F.dim:
        raise DimensionError(f"form has {F.dim} variables, got points of length {len(x)}, {len(y)}")
    return dot(vector(x), F.apply(y))


def substitute_linear(F: QuadraticForm, basis: Sequence[Sequence]) -> QuadraticForm:
    """The form ``Q(Y) = F(sum_i Y_i b_i)``; its entries are ``F(b_i, b_j)``."""
    bs = [vector(b) for b in basis]
    if not bs or len(bs) > F.dim:
        raise DimensionError(f"need between 1 and {F.dim} basis vectors, got {len(bs)}")
    for b in bs:
        if len(b) != F.dim:
            raise DimensionError(f"basis vector of length {len(b)} for a form in {F.dim} variables")
    images = [F.apply(b) for b in bs]
    return QuadraticForm(tuple(tuple(dot(bi, Fbj) for Fbj in images) for bi in bs))


def _term(c: Fraction, mono: str, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    coef = "" if a == 1 and mono else format_rational(a)
    sep = "*" if coef and mono else ""
    return f"{sign}{coef}{sep}{mono}"


def _linear_str(coeffs) -> str:
    out = []
    for i, c in enumerate(coeffs):
        if c:
            out.append(_term(c, f"X{i}", not out))
    return " ".join(out) if out else "0"


def _poly2_str(terms: dict) -> str:
    out = []
    for (i, j), c in sorted(terms.items()):
        mono = f"X{i}^2" if i == j else f"X{i}*X{j}"
        out.append(_term(c, mono, not out))
    return " ".join(out)
