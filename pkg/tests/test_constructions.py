"""Block constructions, exterior squares, and commutant orbit dimensions."""

import numpy as np
import pytest

from anosovcert.constructions import (
    BlockSpec,
    centralizer_basis,
    centralizer_orbit_dim,
    conjugated_free_product_rep,
    diagonal_copies_rep,
    exterior_square,
    invariant_wedge_vector,
    last_block_rep,
    lex_pairs,
    quat_hyperbolic_element,
    wedge_limit_flag,
)
from anosovcert.families import sanov_rep
from anosovcert.quaternion import complexify


def specs():
    return BlockSpec(copies=2, padding=1, block_dim=2)


# -- block specs and embeddings ------------------------------------------------------

def test_block_spec_validation():
    assert BlockSpec(2, 1, 2).total == 5
    assert BlockSpec(3, 0, 2).total == 6
    with pytest.raises(ValueError):
        BlockSpec(0, 0, 2)
    with pytest.raises(ValueError):
        BlockSpec(1, -1, 2)
    with pytest.raises(ValueError):
        BlockSpec(1, 0, 0)


def test_diagonal_copies_structure():
    rep = diagonal_copies_rep(sanov_rep(), specs())
    assert rep.dim == 5
    assert rep.has_exact
    base = sanov_rep()
    w = base.group.parse("a b^-1 a")
    m = rep.evaluate(w)
    block = base.evaluate(w)
    assert m[0, 0] == 1.0 and np.count_nonzero(m[0]) == 1
    assert np.allclose(m[1:3, 1:3], block, atol=1e-12)
    assert np.allclose(m[3:5, 3:5], block, atol=1e-12)
    assert np.allclose(m[1:3, 3:5], 0.0)


def test_last_block_structure():
    rep = last_block_rep(sanov_rep(), specs())
    base = sanov_rep()
    w = base.group.parse("b a")
    m = rep.evaluate(w)
    assert np.allclose(m[:3, :3], np.eye(3))
    assert np.allclose(m[3:5, 3:5], base.evaluate(w), atol=1e-12)


def test_block_constructions_validate_shapes():
    with pytest.raises(ValueError):
        diagonal_copies_rep(sanov_rep(), BlockSpec(2, 0, 3))
    with pytest.raises(ValueError):
        last_block_rep(sanov_rep(), BlockSpec(1, 2, 2))


def test_singular_value_profile_merges():
    # sigma profile of diag(I_r, g, ..., g): r ones plus p copies of each
    # singular value of g
    rep = diagonal_copies_rep(sanov_rep(), specs())
    base = sanov_rep()
    w = base.group.parse("a^2 b")
    got = np.linalg.svd(rep.evaluate(w), compute_uv=False)
    base_s = np.linalg.svd(base.evaluate(w), compute_uv=False)
    expected = np.sort(np.concatenate([[1.0], base_s, base_s]))[::-1]
    assert np.allclose(got, expected, rtol=1e-12)


def test_exact_freeness_survives_embedding():
    rep = diagonal_copies_rep(sanov_rep(), specs())
    assert rep.freeness_check_exact(3).ok
    last = last_block_rep(sanov_rep(), specs())
    # the last-block factor alone is still a faithful copy
    assert last.freeness_check_exact(3).ok


# -- conjugated free products ----------------------------------------------------------

def conj_inputs(seed=5, scale=0.2):
    rng = np.random.default_rng(seed)
    spec = specs()
    diag = diagonal_copies_rep(sanov_rep(), spec)
    last = last_block_rep(sanov_rep(), spec)
    c = [np.eye(5) + scale * rng.standard_normal((5, 5)) for _ in range(2)]
    w2 = np.linalg.qr(rng.standard_normal((5, 5)))[0]
    return diag, last, c, w2


def test_conjugated_free_product_mixed_word_oracle():
    diag, last, (c1, c2), w2 = conj_inputs()
    rep = conjugated_free_product_rep(diag, last, [c1, c2], anchors=[w2])
    assert rep.group.num_factors == 2
    assert rep.dim == 5
    base = sanov_rep().group
    wa = base.parse("a")
    wb = base.parse("b^-1 a")
    word = rep.group.parse("c1:a c2:b^-1 c2:a")
    f2 = c2 @ w2
    expected = (c1 @ diag.evaluate(wa) @ np.linalg.inv(c1)
                @ f2 @ last.evaluate(wb) @ np.linalg.inv(f2))
    assert np.allclose(rep.evaluate(word), expected, atol=1e-9)


def test_conjugated_free_product_common_conjugator():
    diag, last, (c1, _), _ = conj_inputs()
    rep = conjugated_free_product_rep(diag, last, [c1, c1])
    base = sanov_rep().group
    word = rep.group.parse("c1:a c2:b")
    inner = diag.evaluate(base.parse("a")) @ last.evaluate(base.parse("b"))
    assert np.allclose(rep.evaluate(word),
                       c1 @ inner @ np.linalg.inv(c1), atol=1e-9)


def test_conjugated_free_product_default_names_and_anchors():
    diag, last, cs, _ = conj_inputs()
    rep = conjugated_free_product_rep(diag, last, cs)
    assert [f.name for f in rep.group.factors] == ["c1", "c2"]
    assert rep.group.factors[0].generators == ("a", "b")
    named = conjugated_free_product_rep(diag, last, cs,
                                        factor_names=["left", "right"])
    assert [f.name for f in named.group.factors] == ["left", "right"]


def test_conjugated_free_product_validation():
    diag, last, cs, w2 = conj_inputs()
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, last, cs[:1])
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, last, cs, anchors=[w2, w2])
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, last, [cs[0], np.zeros((5, 5))])
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, last, [cs[0], np.eye(4)])
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, last, cs, factor_names=["x"])
    with pytest.raises(ValueError):
        conjugated_free_product_rep(diag, sanov_rep(), cs)


# -- exterior squares and wedge flags ----------------------------------------------------

def test_lex_pairs_order():
    assert lex_pairs(4) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert len(lex_pairs(6)) == 15


def test_exterior_square_identity_and_diagonal():
    assert np.allclose(exterior_square(np.eye(3)), np.eye(3))
    w = exterior_square(np.diag([2.0, 3.0, 5.0]))
    assert np.allclose(w, np.diag([6.0, 10.0, 15.0]))


def test_exterior_square_multiplicative(rng):
    for _ in range(20):
        a = rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4))
        assert np.allclose(exterior_square(a @ b),
                           exterior_square(a) @ exterior_square(b), atol=1e-10)


def test_exterior_square_determinant_in_dim_two():
    g = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert exterior_square(g).shape == (1, 1)
    assert exterior_square(g)[0, 0] == pytest.approx(np.linalg.det(g))
    with pytest.raises(ValueError):
        exterior_square(np.ones((2, 3)))


def test_quat_hyperbolic_element_complexification():
    b = 0.7
    m = complexify(quat_hyperbolic_element(b))
    eb = np.exp(b)
    assert np.allclose(m, np.diag([eb, eb, 1.0, 1.0, 1 / eb, 1 / eb]))


def test_wedge_limit_flag_basis_point():
    flag = wedge_limit_flag([1.0, 0.0, 0.0, 0.0])
    flag.validate()
    line = flag.line.frame[:, 0]
    nz = np.nonzero(np.abs(line) > 1e-14)[0]
    # u = e1 + e3, v = e4 + e6 up to conjugation, so the wedge hits the
    # lexicographic pairs (0,3), (0,5), (2,3), (2,5)
    assert list(nz) == [2, 4, 9, 11]
    assert np.vdot(invariant_wedge_vector(), line) == 0


def test_wedge_limit_flag_orthogonal_to_invariant_vector(rng):
    w0 = invariant_wedge_vector()
    for _ in range(50):
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a /= np.linalg.norm(a)
        flag = wedge_limit_flag(a)
        assert abs(np.vdot(w0, flag.line.frame[:, 0])) < 1e-12
        # the flag is incident: the line lies inside its own hyperplane's
        # complement by construction
        assert flag.hyperplane.dim == 14


def test_wedge_limit_flag_validation():
    with pytest.raises(ValueError):
        wedge_limit_flag([1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        wedge_limit_flag([1.0, 1.0, 0.0, 0.0])


def test_invariant_wedge_vector_entries():
    w0 = invariant_wedge_vector()
    pairs = lex_pairs(6)
    assert w0[pairs.index((0, 3))] == 1.0
    assert w0[pairs.index((1, 4))] == 1.0
    assert w0[pairs.index((2, 5))] == -1.0
    assert np.count_nonzero(w0) == 3


# -- commutant bases and orbit dimensions ---------------------------------------------------

def test_centralizer_basis_counts_and_commutation():
    spec = specs()
    rep = diagonal_copies_rep(sanov_rep(), spec)
    basis = centralizer_basis(spec, "copies")
    assert basis.shape[0] == spec.padding ** 2 + spec.copies ** 2
    for g in range(2):
        img = rep.letter_matrix(2 * g)
        for z in basis:
            assert np.max(np.abs(z @ img - img @ z)) < 1e-10


def test_centralizer_basis_last_block():
    spec = specs()
    rep = last_block_rep(sanov_rep(), spec)
    basis = centralizer_basis(spec, "last_block")
    head = spec.padding + (spec.copies - 1) * spec.block_dim
    assert basis.shape[0] == head ** 2 + 1
    for g in range(2):
        img = rep.letter_matrix(2 * g)
        for z in basis:
            assert np.max(np.abs(z @ img - img @ z)) < 1e-10
    with pytest.raises(ValueError):
        centralizer_basis(spec, "middle")


@pytest.mark.parametrize("copies,padding,block_dim,expected", [
    (2, 0, 3, 4),   # p^2 when the block is big enough
    (2, 1, 2, 5),   # p^2 + r
    (3, 0, 2, 6),   # p * block_dim < p^2: the bound is not attained
])
def test_centralizer_orbit_dim_generic(copies, padding, block_dim, expected, rng):
    spec = BlockSpec(copies, padding, block_dim)
    for _ in range(10):
        v = rng.standard_normal(spec.total)
        dim = centralizer_orbit_dim(spec, v)
        assert dim == expected
        assert dim <= copies ** 2 + padding


def test_centralizer_orbit_dim_degenerate_vectors():
    spec = BlockSpec(2, 0, 3)
    v = np.zeros(6)
    v[0] = 1.0  # supported on the first copy only
    assert centralizer_orbit_dim(spec, v) == 2
    spec_pad = BlockSpec(2, 1, 2)
    v = np.zeros(5)
    v[0] = 1.0  # padding only
    assert centralizer_orbit_dim(spec_pad, v) == 1
    with pytest.raises(ValueError):
        centralizer_orbit_dim(spec, np.zeros(6))
    with pytest.raises(ValueError):
        centralizer_orbit_dim(spec, np.ones(5))
