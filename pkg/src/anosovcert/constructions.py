"""Block-diagonal amalgams, quaternionic models, and wedge-square geometry.

Three representation builders live here.  diagonal_copies_rep repeats a
matrix group p times down the diagonal after an identity padding block;
last_block_rep keeps only the final copy nontrivial; and
conjugated_free_product_rep glues one diagonal-copies factor with several
conjugated last-block factors into a representation of their free product.

The quaternionic side provides hyperbolic model elements diag(e^b, 1, e^-b)
over the quaternions, the second exterior power in the lexicographic wedge
basis, and the explicit boundary flags of the 15-dimensional wedge
representation together with the vector cutting out their common hyperplane.

centralizer_basis / centralizer_orbit_dim expose the commutant of the
block constructions as concrete matrices and the dimension of its orbit
through a vector, which is bounded by copies^2 + padding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .config import DEFAULT_THRESHOLDS, Thresholds
from .linalg import Flag, Subspace
from .quaternion import QuatMat, Quaternion
from .reps import Rep
from .words import FactorPresentation, FreeProduct

__all__ = [
    "BlockSpec", "diagonal_copies_rep", "last_block_rep",
    "conjugated_free_product_rep", "quat_hyperbolic_element",
    "lex_pairs", "exterior_square", "wedge_limit_flag",
    "invariant_wedge_vector", "centralizer_basis", "centralizer_orbit_dim",
]


@dataclass(frozen=True)
class BlockSpec:
    """Shape of the block constructions: copies of a block plus padding.

    total = copies * block_dim + padding is the ambient dimension.
    """

    copies: int
    padding: int
    block_dim: int

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError("copies must be >= 1")
        if self.padding < 0:
            raise ValueError("padding must be >= 0")
        if self.block_dim < 1:
            raise ValueError("block_dim must be >= 1")

    @property
    def total(self) -> int:
        return self.copies * self.block_dim + self.padding


def _exact_block_identity(q: int):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(q)]
            for i in range(q)]


def _exact_embed(blocks, q: int, spec: BlockSpec, mat) -> tuple:
    """Place the exact matrix `mat` in the listed d-blocks of an identity."""
    out = _exact_block_identity(q)
    d = spec.block_dim
    for b in blocks:
        off = spec.padding + b * d
        for i in range(d):
            for j in range(d):
                out[off + i][off + j] = mat[i][j]
    return tuple(tuple(row) for row in out)


def _float_embed(blocks, q: int, spec: BlockSpec, mat: np.ndarray) -> np.ndarray:
    out = np.eye(q, dtype=mat.dtype)
    d = spec.block_dim
    for b in blocks:
        off = spec.padding + b * d
        out[off:off + d, off:off + d] = mat
    return out


def diagonal_copies_rep(rep: Rep, spec: BlockSpec) -> Rep:
    """Repeat every generator image down the diagonal: diag(I, g, ..., g).

    The padding identity block comes first, then `copies` copies of the
    image.  Exact generator images are carried through when present.
    """
    if spec.block_dim != rep.dim:
        raise ValueError(f"block_dim {spec.block_dim} does not match the "
                         f"representation dimension {rep.dim}")
    q = spec.total
    blocks = range(spec.copies)
    images = [_float_embed(blocks, q, spec, rep.letter_matrix(2 * g))
              for g in range(rep.group.num_generators)]
    ex = rep.exact_generator_images()
    exact_images = None if ex is None else \
        [_exact_embed(blocks, q, spec, m) for m in ex]
    return Rep(rep.group, images, field=rep.field, exact_images=exact_images)


def last_block_rep(rep: Rep, spec: BlockSpec) -> Rep:
    """Keep only the final diagonal block nontrivial: diag(I, ..., I, g).

    Needs copies >= 2; with a single copy there is no identity copy left
    and the construction collapses to diagonal_copies_rep.
    """
    if spec.copies < 2:
        raise ValueError("last_block_rep needs copies >= 2")
    if spec.block_dim != rep.dim:
        raise ValueError(f"block_dim {spec.block_dim} does not match the "
                         f"representation dimension {rep.dim}")
    q = spec.total
    blocks = [spec.copies - 1]
    images = [_float_embed(blocks, q, spec, rep.letter_matrix(2 * g))
              for g in range(rep.group.num_generators)]
    ex = rep.exact_generator_images()
    exact_images = None if ex is None else \
        [_exact_embed(blocks, q, spec, m) for m in ex]
    return Rep(rep.group, images, field=rep.field, exact_images=exact_images)


def _flat_generator_names(group: FreeProduct) -> tuple:
    if len(group.factors) == 1:
        return group.factors[0].generators
    return tuple(f"{fac.name}_{g}" for fac in group.factors
                 for g in fac.generators)


def conjugated_free_product_rep(diag_rep: Rep, last_rep: Rep, conjugators,
                                anchors=None, factor_names=None) -> Rep:
    """Free product of conjugated copies: one diagonal-copies factor plus
    last-block factors.

    conjugators lists one invertible matrix per factor (length >= 2).  The
    first factor's generators map to c[0] * diag_image * c[0]^-1; factor
    i >= 1 maps through (c[i] * anchors[i-1]) * last_image * (...)^-1.
    Anchors default to identities.  All matrices must share the dimension
    of the two input representations, which must represent the same group.
    """
    if diag_rep.group != last_rep.group:
        raise ValueError("the two input representations must share a group")
    if diag_rep.dim != last_rep.dim:
        raise ValueError("the two input representations must share a dimension")
    conjugators = [np.asarray(c) for c in conjugators]
    ell = len(conjugators)
    if ell < 2:
        raise ValueError("need at least two factors (two conjugators)")
    if anchors is None:
        anchors = [np.eye(diag_rep.dim) for _ in range(ell - 1)]
    anchors = [np.asarray(w) for w in anchors]
    if len(anchors) != ell - 1:
        raise ValueError(f"expected {ell - 1} anchors (one per later factor), "
                         f"got {len(anchors)}")
    q = diag_rep.dim
    for tag, mats in (("conjugator", conjugators), ("anchor", anchors)):
        for i, m in enumerate(mats):
            if m.shape != (q, q):
                raise ValueError(f"{tag} {i} has shape {m.shape}, expected {(q, q)}")
            if not np.all(np.isfinite(m)):
                raise ValueError(f"{tag} {i} has non-finite entries")
            if np.linalg.svd(m, compute_uv=False)[-1] <= 1e-12:
                raise ValueError(f"{tag} {i} is singular or nearly so")

    if factor_names is None:
        factor_names = [f"c{i + 1}" for i in range(ell)]
    if len(factor_names) != ell:
        raise ValueError("factor_names length must match the conjugator count")
    gen_names = _flat_generator_names(diag_rep.group)
    group = FreeProduct([FactorPresentation(nm, gen_names) for nm in factor_names])

    base_count = diag_rep.group.num_generators
    images = []
    complex_any = any(np.iscomplexobj(m) for m in conjugators + anchors)
    for fi in range(ell):
        if fi == 0:
            frame = conjugators[0]
            source = diag_rep
        else:
            frame = conjugators[fi] @ anchors[fi - 1]
            source = last_rep
        frame_inv = np.linalg.inv(frame)
        for g in range(base_count):
            images.append(frame @ source.letter_matrix(2 * g) @ frame_inv)
    field = "C" if complex_any or diag_rep.field == "C" or last_rep.field == "C" \
        else "R"
    return Rep(group, images, field=field)


def quat_hyperbolic_element(b: float) -> QuatMat:
    """The quaternionic hyperbolic translation diag(e^b, 1, e^-b)."""
    eb = float(np.exp(b))
    return QuatMat.diag([Quaternion(eb, 0, 0, 0), Quaternion(1, 0, 0, 0),
                         Quaternion(1.0 / eb, 0, 0, 0)])


def lex_pairs(n: int) -> list:
    """Index pairs (i, j), i < j, in lexicographic order; the wedge basis."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def exterior_square(g) -> np.ndarray:
    """Matrix of the second exterior power in the lexicographic wedge basis.

    Entry ((i,j),(k,l)) is g[i,k] g[j,l] - g[i,l] g[j,k]; the basis
    {e_i ^ e_j : i < j} is orthonormal when the e_i are.
    """
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"square matrix required, got shape {g.shape}")
    n = g.shape[0]
    pairs = lex_pairs(n)
    m = len(pairs)
    out = np.empty((m, m), dtype=g.dtype)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            out[a, b] = g[i, k] * g[j, l] - g[i, l] * g[j, k]
    return out


def wedge_limit_flag(a) -> Flag:
    """Boundary flag of the wedge representation from a unit 4-vector.

    For a = (a1, a2, a3, a4) with |a|^2 = 1 the attracting line is spanned
    by the wedge of u = (a1, a2, 1, conj(a3), conj(a4), 0) and
    v = (-a3, -a4, 0, conj(a1), conj(a2), 1), written out in the
    lexicographic basis of dimension 15; the hyperplane is its orthogonal
    complement.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    if a.shape != (4,):
        raise ValueError("expected four complex numbers")
    norm2 = float(np.sum(np.abs(a) ** 2))
    if abs(norm2 - 1.0) > 1e-10:
        raise ValueError(f"|a|^2 = {norm2!r} must equal 1 within 1e-10")
    a1, a2, a3, a4 = a
    u = np.array([a1, a2, 1.0, np.conj(a3), np.conj(a4), 0.0])
    v = np.array([-a3, -a4, 0.0, np.conj(a1), np.conj(a2), 1.0])
    pairs = lex_pairs(6)
    w = np.array([u[i] * v[j] - u[j] * v[i] for i, j in pairs])
    line = Subspace.line(w)
    return Flag(line, line.orthogonal_complement())


def invariant_wedge_vector() -> np.ndarray:
    """The 15-vector e1^e4 + e2^e5 - e3^e6 every boundary line avoids."""
    pairs = lex_pairs(6)
    w = np.zeros(15)
    w[pairs.index((0, 3))] = 1.0
    w[pairs.index((1, 4))] = 1.0
    w[pairs.index((2, 5))] = -1.0
    return w


def centralizer_basis(spec: BlockSpec, which: str = "copies") -> np.ndarray:
    """Spanning matrices of the commutant of a block construction.

    which = "copies": matrix units on the padding block plus block-unit
    matrices tensored with the identity across the copies
    (padding^2 + copies^2 matrices).  which = "last_block": matrix units on
    everything before the final block plus the identity on that block
    ((padding + (copies-1) * block_dim)^2 + 1 matrices).
    """
    q = spec.total
    d = spec.block_dim
    r = spec.padding
    p = spec.copies
    mats = []
    if which == "copies":
        for a in range(r):
            for b in range(r):
                m = np.zeros((q, q))
                m[a, b] = 1.0
                mats.append(m)
        for i in range(p):
            for j in range(p):
                m = np.zeros((q, q))
                ri, cj = r + i * d, r + j * d
                m[ri:ri + d, cj:cj + d] = np.eye(d)
                mats.append(m)
    elif which == "last_block":
        head = r + (p - 1) * d
        for a in range(head):
            for b in range(head):
                m = np.zeros((q, q))
                m[a, b] = 1.0
                mats.append(m)
        m = np.zeros((q, q))
        m[head:, head:] = np.eye(d)
        mats.append(m)
    else:
        raise ValueError(f"which must be 'copies' or 'last_block', got {which!r}")
    return np.array(mats)


def centralizer_orbit_dim(spec: BlockSpec, v,
                          thresholds: Thresholds = DEFAULT_THRESHOLDS) -> int:
    """Dimension of the commutant orbit through v; at most copies^2 + padding.

    The span of {z v : z in the commutant of the diagonal-copies
    construction} decomposes block-wise, so its dimension is bounded by
    copies^2 + padding regardless of v.
    """
    v = np.asarray(v).reshape(-1)
    if v.shape != (spec.total,):
        raise ValueError(f"vector length {v.shape[0]} != total dimension "
                         f"{spec.total}")
    if not np.any(v != 0):
        raise ValueError("the orbit of the zero vector is trivial")
    basis = centralizer_basis(spec, "copies")
    orbit = basis @ v
    s = np.linalg.svd(orbit, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > thresholds.rank_tol * s[0]))
