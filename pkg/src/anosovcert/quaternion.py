"""Quaternions, quaternionic matrices, and their complex realization.

A quaternion a + b i + c j + d k is stored as four floats.  The complex
realization used everywhere is

    a + b i + c j + d k  ->  [[a + b i, c + d i], [-c + d i, a - b i]],

extended entrywise to matrices (each quaternion entry becomes a 2x2 complex
block).  This map is an injective ring homomorphism, sends the conjugate
q -> q.conj() to the Hermitian adjoint of the block, and sends |q|^2 to the
determinant of the block.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Quaternion", "QuatMat", "complexify"]


class Quaternion:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float = 0.0, b: float = 0.0, c: float = 0.0, d: float = 0.0):
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.d = float(d)

    @classmethod
    def from_real(cls, x) -> "Quaternion":
        if isinstance(x, Quaternion):
            return x
        return cls(float(x))

    def __add__(self, other):
        o = Quaternion.from_real(other)
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-Quaternion.from_real(other))

    def __rsub__(self, other):
        return Quaternion.from_real(other) + (-self)

    def __mul__(self, other):
        o = Quaternion.from_real(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        return Quaternion.from_real(other) * self

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> float:
        return math.sqrt(self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2)

    def inverse(self) -> "Quaternion":
        n2 = self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2
        if n2 == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conjugate()
        return Quaternion(c.a / n2, c.b / n2, c.c / n2, c.d / n2)

    def to_block(self) -> np.ndarray:
        """The 2x2 complex block realizing this quaternion."""
        return np.array(
            [[complex(self.a, self.b), complex(self.c, self.d)],
             [complex(-self.c, self.d), complex(self.a, -self.b)]],
            dtype=np.complex128)

    def is_close(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (abs(self.a - other.a) <= tol and abs(self.b - other.b) <= tol
                and abs(self.c - other.c) <= tol and abs(self.d - other.d) <= tol)

    def __repr__(self):
        return f"Quaternion({self.a}, {self.b}, {self.c}, {self.d})"

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))


class QuatMat:
    """A square quaternionic matrix (nested tuples of Quaternion)."""

    __slots__ = ("entries", "n")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(Quaternion.from_real(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("QuatMat must be square and non-empty")
        self.entries = rows
        self.n = n

    @classmethod
    def identity(cls, n: int) -> "QuatMat":
        return cls([[Quaternion(1.0 if i == j else 0.0) for j in range(n)]
                    for i in range(n)])

    @classmethod
    def diag(cls, values: Iterable) -> "QuatMat":
        vals = [Quaternion.from_real(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else Quaternion() for j in range(n)]
                    for i in range(n)])

    def __matmul__(self, other: "QuatMat") -> "QuatMat":
        if not isinstance(other, QuatMat) or other.n != self.n:
            raise ValueError("size mismatch in quaternionic product")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = Quaternion()
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return QuatMat(out)

    def conjugate_transpose(self) -> "QuatMat":
        return QuatMat([[self.entries[j][i].conjugate() for j in range(self.n)]
                        for i in range(self.n)])

    def is_close(self, other: "QuatMat", tol: float = 1e-12) -> bool:
        if other.n != self.n:
            return False
        return all(self.entries[i][j].is_close(other.entries[i][j], tol)
                   for i in range(self.n) for j in range(self.n))

    def __repr__(self):
        return f"QuatMat(n={self.n})"


def complexify(m: QuatMat) -> np.ndarray:
    """Realize an n x n quaternionic matrix as a 2n x 2n complex matrix.

    Multiplicative: complexify(A @ B) == complexify(A) @ complexify(B), and
    the conjugate transpose goes to the Hermitian adjoint.
    """
    n = m.n
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = m.entries[i][j].to_block()
    return out
