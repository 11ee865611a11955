"""Deterministic enumeration of integer vectors by sup-norm shells.

Scan order
----------
Shells are visited by increasing sup-norm ``r``. Inside a shell, vectors
are compared colexicographically (the last coordinate is most significant)
with each coordinate ordered ``0, 1, -1, 2, -2, ...``. So in two variables
shell 1 reads ``(1, 0), (0, 1), (1, 1), (1, -1), ...`` after dropping
non-canonical rays. :func:`order_key` reproduces the order for arbitrary
vectors, so anything sorted with it agrees with the scan.

A *canonical* vector has its first nonzero coordinate positive, which picks
one representative per ray when combined with ``primitive=True``.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterator, Sequence, Tuple

import numpy as np

_CHUNK_ROWS = 1 << 18
_CACHE_ROWS = 1 << 16
_INT64_SAFE = 1 << 62


def digit_values(r: int) -> np.ndarray:
    """Coordinate values ``0, 1, -1, ..., r, -r`` in scan order."""
    d = np.arange(2 * r + 1)
    return np.where(d % 2 == 1, (d + 1) // 2, -(d // 2)).astype(np.int64)


def coordinate_rank(c: int) -> int:
    return 2 * abs(c) - (1 if c > 0 else 0)


def order_key(v: Sequence[int]) -> Tuple[int, ...]:
    """Sort key matching the enumeration order (shell first)."""
    vs = [int(c) for c in v]
    return (max((abs(c) for c in vs), default=0),) + tuple(coordinate_rank(c) for c in reversed(vs))


def _grid(values: np.ndarray, k: int) -> np.ndarray:
    """All ``k``-tuples over ``values``; column ``k-1`` varies slowest."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*([values] * k), indexing="ij")
    # mesh[0] varies slowest and becomes the last coordinate
    cols = [m.reshape(-1) for m in reversed(mesh)]
    return np.stack(cols, axis=1)


def _filter(block: np.ndarray, r: int, canonical: bool, primitive: bool) -> np.ndarray:
    keep = np.abs(block).max(axis=1) == r
    if canonical and block.shape[1]:
        nz = block != 0
        first = np.argmax(nz, axis=1)
        lead = block[np.arange(len(block)), first]
        keep &= lead > 0
    if primitive and r > 1:
        keep &= np.gcd.reduce(block, axis=1) == 1
    return block[keep]


def iter_shell(n: int, r: int, canonical: bool = True, primitive: bool = True) -> Iterator[np.ndarray]:
    """Yield the vectors of sup-norm exactly ``r`` in scan order, in chunks."""
    if n < 1:
        raise ValueError("need at least one coordinate")
    if r == 0:
        if not primitive and not canonical:
            yield np.zeros((1, n), dtype=np.int64)
        return
    values = digit_values(r)
    width = 2 * r + 1
    inner = n
    while inner > 1 and width ** inner > _CHUNK_ROWS:
        inner -= 1
    outer = n - inner
    inner_grid = _grid(values, inner)
    if outer == 0:
        out = _filter(inner_grid, r, canonical, primitive)
        if len(out):
            yield out
        return
    # most significant coordinates are the trailing ones; iterate them in order
    for prefix in itertools.product(range(width), repeat=outer):
        tail = values[list(reversed(prefix))]
        block = np.empty((len(inner_grid), n), dtype=np.int64)
        block[:, :inner] = inner_grid
        block[:, inner:] = tail
        out = _filter(block, r, canonical, primitive)
        if len(out):
            yield out


@functools.lru_cache(maxsize=512)
def _cached_shell(n: int, r: int, canonical: bool, primitive: bool) -> np.ndarray:
    parts = list(iter_shell(n, r, canonical, primitive))
    arr = np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def shell_size_estimate(n: int, r: int) -> int:
    if r == 0:
        return 1
    return (2 * r + 1) ** n - (2 * r - 1) ** n


def shell_chunks(n: int, r: int, canonical: bool = True, primitive: bool = True) -> Iterator[np.ndarray]:
    """Like :func:`iter_shell` but served from a cache for small shells."""
    if shell_size_estimate(n, r) <= _CACHE_ROWS:
        arr = _cached_shell(n, r, canonical, primitive)
        if len(arr):
            yield arr
        return
    yield from iter_shell(n, r, canonical, primitive)


def scan(n: int, radius: int, start: int = 1, canonical: bool = True,
         primitive: bool = True) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(r, chunk)`` for shells ``start..radius`` in scan order."""
    for r in range(start, radius + 1):
        for chunk in shell_chunks(n, r, canonical, primitive):
            yield r, chunk


def as_object(X: np.ndarray) -> np.ndarray:
    return X.astype(object)


def quadratic_values(matrix: Sequence[Sequence[int]], X: np.ndarray) -> np.ndarray:
    """``F(x)`` for each row ``x`` of ``X`` with an integer matrix, exactly."""
    A = np.array([[int(c) for c in row] for row in matrix], dtype=object)
    n = A.shape[0]
    amax = max((abs(int(c)) for c in A.reshape(-1)), default=0)
    xmax = int(np.abs(X).max()) if X.size else 0
    if amax * n * n * xmax * xmax < _INT64_SAFE:
        A64 = A.astype(np.int64)
        return np.einsum("ki,ij,kj->k", X, A64, X)
    Xo = X.astype(object)
    return ((Xo @ A) * Xo).sum(axis=1)


def linear_values(coeffs: Sequence[int], X: np.ndarray) -> np.ndarray:
    q = [int(c) for c in coeffs]
    qmax = max((abs(c) for c in q), default=0)
    xmax = int(np.abs(X).max()) if X.size else 0
    if qmax * len(q) * xmax < _INT64_SAFE:
        return X @ np.array(q, dtype=np.int64)
    return X.astype(object) @ np.array(q, dtype=object)
