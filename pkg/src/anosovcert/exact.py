"""Exact rational matrix arithmetic (Fraction entries, no rounding).

Matrices are immutable tuples of tuples of Fraction.  Intended for small
dimensions and moderate word lengths, where entry sizes stay manageable; the
point is that an identity test here is a proof, not an approximation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = ["frac", "matrix", "identity", "matmul", "inverse",
           "is_identity", "to_float"]


def frac(x) -> Fraction:
    """Coerce int, Fraction, or a string like '3/5' or '-2'."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a string or Fraction")
    raise TypeError(f"cannot make a Fraction from {type(x).__name__}")


def matrix(rows: Sequence[Sequence]) -> tuple:
    out = tuple(tuple(frac(x) for x in row) for row in rows)
    n = len(out)
    if n == 0 or any(len(r) != n for r in out):
        raise ValueError("matrix must be square and non-empty")
    return out


def identity(n: int) -> tuple:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def matmul(a: tuple, b: tuple) -> tuple:
    n = len(a)
    if len(b) != n:
        raise ValueError("size mismatch")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
        for row in a)


def is_identity(m: tuple) -> bool:
    n = len(m)
    one, zero = Fraction(1), Fraction(0)
    return all(m[i][j] == (one if i == j else zero)
               for i in range(n) for j in range(n))


def inverse(m: tuple) -> tuple:
    """Gauss-Jordan inverse with partial pivoting by magnitude; exact."""
    n = len(m)
    aug = [list(m[i]) + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot][col] == 0:
            raise ValueError("matrix is singular over the rationals")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def to_float(m: tuple) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=np.float64)
