"""Concrete representation families used by the test suite and the CLI.

The Sanov pair generates a free group of 2x2 integer matrices, so exact
arithmetic can certify freeness along word balls.  The three-factor
Schottky family places diag(lam, 1/lam) and two rotated conjugates at
rational angles (3-4-5 and 7-24-25 triangles), keeping every generator and
every standard set center exactly rational; ready-made ping-pong
configurations for it live here too.  The symmetric square lifts the family
to 3x3 matrices with singular profile (s^2, 1, s^-2), and the wedge model
is the 15-dimensional cyclic representation generated by the second
exterior power of the complexified quaternionic translation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import exact
from .constructions import exterior_square, quat_hyperbolic_element
from .pingpong import PingPongConfig
from .projsets import BallSet, UnionSet
from .quaternion import complexify
from .reps import Rep
from .words import FactorPresentation, FreeProduct

__all__ = [
    "sanov_rep", "rotation", "exact_rotation_3_4_5", "schottky_triple_rep",
    "schottky_triple_sets", "schottky_triple_config", "sym2",
    "sym2_schottky_rep", "wedge_tau_rep", "cyclic_diag_rep", "trivial_rep",
]


def sanov_rep() -> Rep:
    """The free pair [[1,2],[0,1]], [[1,0],[2,1]] with exact entries."""
    group = FreeProduct([FactorPresentation("F", ("a", "b"))])
    a = ((Fraction(1), Fraction(2)), (Fraction(0), Fraction(1)))
    b = ((Fraction(1), Fraction(0)), (Fraction(2), Fraction(1)))
    images = [exact.to_float(a), exact.to_float(b)]
    return Rep(group, images, field="R", exact_images=[a, b])


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def exact_rotation_3_4_5() -> tuple:
    """The rational rotation with cosine 3/5 and sine 4/5."""
    return ((Fraction(3, 5), Fraction(-4, 5)),
            (Fraction(4, 5), Fraction(3, 5)))


def _schottky_letter_exact(lam: Fraction, power: int) -> tuple:
    """R^power diag(lam, 1/lam) R^-power with the 3-4-5 rotation."""
    a = ((lam, Fraction(0)), (Fraction(0), Fraction(1) / lam))
    r = exact.matrix(exact_rotation_3_4_5())
    m = exact.matrix(a)
    for _ in range(power):
        m = exact.matmul(exact.matmul(r, m), exact.inverse(r))
    return m


def schottky_triple_rep(lam) -> Rep:
    """Three rank-one factors: diag(lam, 1/lam) and two rotated conjugates.

    lam is an exact rational > 1.  The conjugating rotations are the 3-4-5
    rotation and its square, so every image is exactly rational and
    freeness can be cross-checked with exact arithmetic.
    """
    lam = Fraction(lam)
    if lam <= 1:
        raise ValueError("lam must be > 1")
    group = FreeProduct([FactorPresentation("A", ("a",)),
                         FactorPresentation("B", ("b",)),
                         FactorPresentation("C", ("c",))])
    ex = [_schottky_letter_exact(lam, k) for k in range(3)]
    images = [exact.to_float(m) for m in ex]
    return Rep(group, images, field="R", exact_images=ex)


def _ball_pair(c1, c2, radius: float) -> UnionSet:
    return UnionSet([BallSet(np.array(c1, dtype=float), radius),
                     BallSet(np.array(c2, dtype=float), radius)])


def schottky_triple_sets(ball_radius: float = 0.1) -> tuple:
    """(C1, C2, [M2, M3]) around the six rational axis lines.

    C2 holds the attracting lines of the first factor (the coordinate
    axes), M2 and M3 those of the rotated factors, and C1 is their union.
    """
    c2 = _ball_pair((1.0, 0.0), (0.0, 1.0), ball_radius)
    m2 = _ball_pair((3 / 5, 4 / 5), (-4 / 5, 3 / 5), ball_radius)
    m3 = _ball_pair((-7 / 25, 24 / 25), (24 / 25, 7 / 25), ball_radius)
    c1 = UnionSet(list(m2.parts) + list(m3.parts))
    return c1, c2, [m2, m3]


def schottky_triple_config(lam, alpha: float | None = None, radius: int = 6,
                           samples: int = 2048, seed: int = 0,
                           ball_radius: float = 0.1) -> PingPongConfig:
    """Ready-to-check ping-pong configuration for the Schottky triple.

    The default growth rate is half the top rate, log(sqrt(lam)), which
    leaves a positive margin exactly when the sets absorb the slack between
    the singular value and the distance to the repelling line.
    """
    lam = Fraction(lam)
    if alpha is None:
        alpha = 0.5 * math.log(float(lam))
    c1, c2, m_sets = schottky_triple_sets(ball_radius)
    return PingPongConfig(rep=schottky_triple_rep(lam), c1=c1, c2=c2,
                          m_sets=m_sets, alpha=float(alpha), radius=radius,
                          samples=samples, seed=seed)


def sym2(g) -> np.ndarray:
    """Symmetric square of a 2x2 matrix in an orthonormal basis.

    Basis (e1*e1, sqrt(2) e1*e2, e2*e2); the map is multiplicative and
    sends SL2 into SL3.
    """
    g = np.asarray(g)
    if g.shape != (2, 2):
        raise ValueError(f"2x2 matrix required, got {g.shape}")
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    s = np.sqrt(np.asarray(2.0, dtype=g.dtype if g.dtype.kind == "c" else float))
    return np.array([
        [a * a, s * a * b, b * b],
        [s * a * c, a * d + b * c, s * b * d],
        [c * c, s * c * d, d * d],
    ])


def sym2_schottky_rep(lam) -> Rep:
    """The Schottky triple pushed through the symmetric square, in dim 3.

    Singular profile of each generator is (s^2, 1, s^-2), so the middle
    singular value sits exactly at 1 and only the outer gaps grow.
    """
    base = schottky_triple_rep(lam)
    images = [sym2(base.letter_matrix(2 * g))
              for g in range(base.group.num_generators)]
    return Rep(base.group, images, field="R")


def wedge_tau_rep(b: float) -> Rep:
    """Cyclic group generated by the 15-dimensional wedge of the
    complexified quaternionic translation diag(e^b, 1, e^-b)."""
    if b <= 0:
        raise ValueError("b must be positive")
    g = exterior_square(complexify(quat_hyperbolic_element(b)))
    group = FreeProduct([FactorPresentation("Z", ("t",))])
    return Rep(group, [g], field="C")


def cyclic_diag_rep(entries) -> Rep:
    """Cyclic group generated by one diagonal matrix."""
    entries = np.asarray(entries, dtype=float)
    group = FreeProduct([FactorPresentation("Z", ("t",))])
    return Rep(group, [np.diag(entries)], field="R")


def trivial_rep(dim: int, rank: int = 1) -> Rep:
    """Everything maps to the identity."""
    names = tuple(f"g{i + 1}" for i in range(rank))
    group = FreeProduct([FactorPresentation("T", names)])
    return Rep(group, [np.eye(dim) for _ in range(rank)], field="R")
