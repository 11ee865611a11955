import itertools
import math

import numpy as np
import pytest

from smallzeros.lattice import (
    coordinate_rank,
    digit_values,
    iter_shell,
    linear_values,
    order_key,
    quadratic_values,
    scan,
    shell_chunks,
)


def _shell(n, r, **kw):
    parts = list(iter_shell(n, r, **kw))
    return np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)


def test_digit_order():
    assert digit_values(2).tolist() == [0, 1, -1, 2, -2]
    assert [coordinate_rank(c) for c in (0, 1, -1, 2, -2)] == [0, 1, 2, 3, 4]


def test_first_shell_in_two_variables():
    assert _shell(2, 1).tolist() == [[1, 0], [0, 1], [1, 1], [1, -1]]


@pytest.mark.parametrize("n,r", [(1, 3), (2, 4), (3, 3), (4, 2)])
def test_shell_matches_reference(n, r):
    got = [tuple(v) for v in _shell(n, r)]
    ref = []
    for v in itertools.product(range(-r, r + 1), repeat=n):
        if max(map(abs, v)) != r or math.gcd(*v) != 1:
            continue
        if next(c for c in v if c) < 0:
            continue
        ref.append(v)
    ref.sort(key=order_key)
    assert got == ref


def test_noncanonical_shell_counts():
    full = _shell(3, 2, canonical=False, primitive=False)
    assert len(full) == 5 ** 3 - 3 ** 3
    assert len(_shell(2, 0, canonical=False, primitive=False)) == 1


def test_scan_is_sorted_and_large_shells_chunk():
    keys = [order_key(v) for _, chunk in scan(3, 5) for v in chunk]
    assert keys == sorted(keys)
    big = list(shell_chunks(5, 7))
    assert len(big) > 1
    merged = [order_key(v) for chunk in big for v in chunk]
    assert merged == sorted(merged)


def test_values_are_exact():
    A = ((1, 2), (2, -3))
    X = np.array([[1, 1], [2, -1], [0, 5]])
    assert quadratic_values(A, X).tolist() == [2, -7, -75]
    huge = ((10 ** 18, 0), (0, 1))
    assert quadratic_values(huge, np.array([[3, 1]])).tolist() == [9 * 10 ** 18 + 1]
    assert linear_values((10 ** 19, 1), np.array([[2, 3]])).tolist() == [2 * 10 ** 19 + 3]
