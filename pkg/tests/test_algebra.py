"""Span, proximality, adjoint, and genericity checks on known examples."""

import io

import numpy as np
import pytest

from anosovcert.algebra import (
    HEURISTIC_CAVEAT,
    NotProximal,
    REAL_SPAN_CAVEAT,
    adjoint_rep,
    burnside_span_dim,
    conjugate_family_rep,
    genericity_check,
    genericity_to_csv,
    invariant_subspace_refute,
    proximal_data,
    traceless_basis,
    zariski_density_heuristic,
)
from anosovcert.config import Thresholds
from anosovcert.constructions import BlockSpec, diagonal_copies_rep
from anosovcert.families import cyclic_diag_rep, sanov_rep, trivial_rep
from anosovcert.linalg import Subspace, dist_to_subspace, mat_from_json, proj_metric
from anosovcert.reps import Rep
from anosovcert.words import FactorPresentation, FreeProduct


# -- matrix span over word balls -------------------------------------------------------

def test_burnside_span_sanov_fills_matrix_space():
    rep = sanov_rep()
    assert burnside_span_dim(rep, 4) == 4
    assert burnside_span_dim(trivial_rep(3), 4) == 1


def test_burnside_span_monotone_in_length():
    rep = sanov_rep()
    dims = [burnside_span_dim(rep, n) for n in range(1, 5)]
    assert all(a <= b for a, b in zip(dims, dims[1:]))
    with pytest.raises(ValueError):
        burnside_span_dim(rep, 0)


def test_burnside_span_detects_block_structure():
    rep = diagonal_copies_rep(sanov_rep(), BlockSpec(2, 0, 2))
    # images live inside {diag(g, g)}, a 4-dimensional matrix subspace
    assert burnside_span_dim(rep, 4) == 4 < 16


def test_refute_certifies_full_span():
    report = invariant_subspace_refute(sanov_rep(), 4, trials=5)
    assert report["verdict"] == "irreducible (certified)"
    assert report["candidate"] is None
    assert report["span_dim"] == 4
    assert REAL_SPAN_CAVEAT in report["caveats"]


def test_refute_finds_invariant_line():
    # common upper-triangular images fix the line through e1
    group = FreeProduct([FactorPresentation("F", ("a", "b"))])
    rep = Rep(group, [np.array([[2.0, 1.0], [0.0, 0.5]]),
                      np.array([[1.0, 3.0], [0.0, 1.0]])])
    report = invariant_subspace_refute(rep, 3, trials=12)
    assert report["verdict"] == "reducible-suspected"
    assert report["candidate_dim"] == 1
    frame = mat_from_json(report["candidate"])
    assert proj_metric(frame[:, 0], np.array([1.0, 0.0])) < 1e-8


def test_refute_finds_block_subspace():
    rep = diagonal_copies_rep(sanov_rep(), BlockSpec(2, 0, 2))
    report = invariant_subspace_refute(rep, 3, trials=12)
    assert report["verdict"] == "reducible-suspected"
    assert report["candidate_dim"] is not None
    frame = mat_from_json(report["candidate"])
    sub = Subspace(frame)
    # the candidate is genuinely invariant for this exact block structure
    for g in range(2):
        img = rep.letter_matrix(2 * g) @ frame
        for col in img.T:
            assert dist_to_subspace(col, sub) < 1e-8
    with pytest.raises(ValueError):
        invariant_subspace_refute(rep, 3, trials=0)


# -- proximal fixed data -----------------------------------------------------------------

def test_proximal_data_conjugated_diagonal(rng):
    h = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
    w = h @ np.diag([3.0, 2.0, 1.0]) @ np.linalg.inv(h)
    data = proximal_data(w)
    data.validate(w)
    # eigenlines transported from the diagonal model
    assert proj_metric(data.attracting_line.frame[:, 0], h[:, 0]) < 1e-8
    assert proj_metric(data.attracting_line_inverse.frame[:, 0], h[:, 2]) < 1e-8
    # the repelling hyperplane is the invariant complement: image points of
    # it stay inside, and the attracting line stays away from it
    f = data.repelling_hyperplane.frame
    for col in (w @ f).T:
        assert dist_to_subspace(col, data.repelling_hyperplane) < 1e-8
    assert dist_to_subspace(data.attracting_line.frame[:, 0],
                            data.repelling_hyperplane) > 0.01


def test_proximal_data_duality(rng):
    h = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
    w = h @ np.diag([4.0, 1.0, 0.25]) @ np.linalg.inv(h)
    data = proximal_data(w)
    inv = proximal_data(np.linalg.inv(w))
    assert data.attracting_line_inverse.distance_to(inv.attracting_line) < 1e-8
    assert data.repelling_hyperplane_inverse.distance_to(
        inv.repelling_hyperplane) < 1e-8


def test_proximal_data_rejects_rotations_and_top_ties():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(NotProximal, match="top eigenvalue ratio"):
        proximal_data(rot)
    with pytest.raises(NotProximal, match="bottom"):
        proximal_data(np.diag([3.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        proximal_data(np.ones((2, 3)))


# -- adjoint representation ---------------------------------------------------------------

def test_traceless_basis_is_orthonormal():
    for q, cf in ((2, False), (3, False), (3, True)):
        basis = traceless_basis(q, cf)
        assert basis.shape == (q * q - 1, q, q)
        assert all(abs(np.trace(m)) < 1e-12 for m in basis)
        flat = basis.reshape(len(basis), -1)
        gram = flat.conj() @ flat.T
        assert np.allclose(gram, np.eye(len(basis)), atol=1e-12)
    with pytest.raises(ValueError):
        traceless_basis(1)


def test_adjoint_is_functorial(rng):
    for _ in range(50):
        g = np.eye(3) + 0.4 * rng.standard_normal((3, 3))
        h = np.eye(3) + 0.4 * rng.standard_normal((3, 3))
        assert np.allclose(adjoint_rep(g @ h), adjoint_rep(g) @ adjoint_rep(h),
                           atol=1e-9)
    assert np.allclose(adjoint_rep(np.eye(3)), np.eye(8), atol=1e-12)


def test_adjoint_kills_scalars(rng):
    g = np.eye(3) + 0.4 * rng.standard_normal((3, 3))
    assert np.allclose(adjoint_rep(2.5 * g), adjoint_rep(g), atol=1e-9)


def test_adjoint_determinant_is_unimodular(rng):
    g = np.eye(3) + 0.4 * rng.standard_normal((3, 3))
    assert abs(np.linalg.det(adjoint_rep(g))) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        adjoint_rep(np.zeros((3, 3)))


def test_adjoint_reproduces_conjugation(rng):
    g = np.eye(2) + 0.4 * rng.standard_normal((2, 2))
    basis = traceless_basis(2)
    ad = adjoint_rep(g)
    x = rng.standard_normal(3)
    conj = g @ np.tensordot(x, basis, axes=1) @ np.linalg.inv(g)
    coords = np.array([np.sum(conj * b.conj()) for b in basis])
    assert np.allclose(ad @ x, coords, atol=1e-10)


# -- density heuristic ---------------------------------------------------------------------

def test_zariski_sanov_is_dense():
    report = zariski_density_heuristic(sanov_rep(), 4)
    assert report["verdict"] == "dense (heuristic)"
    assert report["ad_span_dim"] == 9
    assert report["ad_dim_squared"] == 9
    assert HEURISTIC_CAVEAT in report["caveats"]


def test_zariski_block_rep_is_not_dense():
    rep = diagonal_copies_rep(sanov_rep(), BlockSpec(2, 0, 2))
    report = zariski_density_heuristic(rep, 3)
    assert report["verdict"] == "not dense"
    assert report["ad_span_dim"] < report["ad_dim_squared"]


def test_zariski_requires_unimodular():
    with pytest.raises(ValueError, match="unimodular"):
        zariski_density_heuristic(cyclic_diag_rep((3.0, 1.0)), 2)


# -- genericity of a matrix family ------------------------------------------------------------

def generic_family(rng, n=2):
    return [np.eye(n) + 0.5 * rng.standard_normal((n, n)) for _ in range(2 * n)]


def test_genericity_random_family_passes(rng):
    n = 2
    report = genericity_check(generic_family(rng, n), np.eye(n)[0], np.eye(n)[0])
    assert report["verdict"] == "pass"
    assert report["subsets_checked"] == 6
    assert report["failure_count"] == 0
    assert len(report["table"]) == 12  # primary and dual per subset
    assert all(row["abs_det"] > 1e-10 for row in report["table"])


def test_genericity_detects_degenerate_family(rng):
    n = 2
    mats = generic_family(rng, n)
    mats[1] = mats[0] @ np.diag([1.0, 2.0])  # same action on e1
    report = genericity_check(mats, np.eye(n)[0], np.eye(n)[0])
    assert report["verdict"] == "fail"
    assert report["failure_count"] >= 1
    assert any(row["family"] == "primary" and set(row["subset"]) == {0, 1}
               for row in report["failures"])


def test_genericity_validation(rng):
    mats = generic_family(rng, 2)
    with pytest.raises(ValueError):
        genericity_check(mats[:3], np.eye(2)[0], np.eye(2)[0])
    with pytest.raises(ValueError):
        genericity_check(mats, np.zeros(2), np.eye(2)[0])
    with pytest.raises(ValueError):
        genericity_check(mats, np.eye(2)[0], np.eye(3)[0])


def test_genericity_csv(rng):
    report = genericity_check(generic_family(rng, 2), np.eye(2)[0], np.eye(2)[0])
    buf = io.StringIO()
    genericity_to_csv(report, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "subset,family,abs_det"
    assert len(lines) == 1 + len(report["table"])
    assert lines[1].startswith("0 1,primary,")


def test_generic_family_conjugates_are_irreducible(rng):
    n = 2
    mats = generic_family(rng, n)
    omega0 = np.eye(n)[0]
    omega1 = np.eye(n)[0]
    report = genericity_check(mats, omega0, omega1)
    assert report["verdict"] == "pass"
    # a proximal g with attracting line e1 and repelling hyperplane e1-perp
    g = np.diag([3.0, 0.5])
    rep = conjugate_family_rep(mats, g)
    assert rep.group.num_generators == 2 * n
    refute = invariant_subspace_refute(rep, 2, trials=4)
    assert refute["verdict"] == "irreducible (certified)"


def test_conjugate_family_rep_images(rng):
    mats = generic_family(rng, 2)
    g = np.diag([2.0, 1.0])
    rep = conjugate_family_rep(mats, g)
    for i, m in enumerate(mats):
        expected = m @ g @ np.linalg.inv(m)
        got = rep.letter_matrix(2 * i)
        assert np.allclose(got, expected, atol=1e-12)
