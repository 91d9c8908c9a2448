"""Projective metric, SVD helpers, and contraction bounds vs sampled oracles."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anosovcert.linalg import (
    Flag,
    GapTooSmall,
    Subspace,
    cartan_attractor,
    cartan_attractor_of_inverse,
    contraction_bound_check,
    dist_to_subspace,
    hyperplane_from_normal,
    mat_from_json,
    mat_to_json,
    moduli_of_eigenvalues,
    near_identity_displacement_check,
    operator_norm,
    proj_metric,
    svd,
    vec_from_json,
    vec_to_json,
)


def random_mat(rng, d, complex_field=False):
    m = rng.standard_normal((d, d))
    if complex_field:
        m = m + 1j * rng.standard_normal((d, d))
    return m


# -- svd and norms -------------------------------------------------------------

def test_svd_reconstructs_matrix(rng):
    for d in (2, 3, 5):
        for cf in (False, True):
            g = random_mat(rng, d, cf)
            s, u, vh = svd(g)
            assert np.allclose(u @ np.diag(s) @ vh, g, atol=1e-10)
            assert np.all(np.diff(s) <= 0)
            assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-10)
            assert np.allclose(vh @ vh.conj().T, np.eye(d), atol=1e-10)


def test_operator_norm_power_iteration_oracle(rng):
    # power iteration on g^H g converges to sigma_1^2
    g = random_mat(rng, 6)
    v = rng.standard_normal(6)
    h = g.T @ g
    for _ in range(3000):
        v = h @ v
        v /= np.linalg.norm(v)
    sigma1 = np.sqrt(v @ h @ v)
    assert operator_norm(g) == pytest.approx(sigma1, rel=1e-9)


def test_operator_norm_sampled_sup_oracle(rng):
    # sup over unit vectors of |g v| can only undershoot sigma_1
    g = random_mat(rng, 4)
    pts = rng.standard_normal((4000, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    sampled = np.max(np.linalg.norm(pts @ g.T, axis=1))
    assert sampled <= operator_norm(g) + 1e-12
    assert sampled > 0.9 * operator_norm(g)


def test_svd_rejects_nonsquare_and_nonfinite():
    with pytest.raises(ValueError):
        svd(np.ones((2, 3)))
    with pytest.raises(ValueError):
        svd(np.array([[1.0, np.inf], [0.0, 1.0]]))


def test_moduli_of_eigenvalues_diag_and_rotation():
    mods = moduli_of_eigenvalues(np.diag([3.0, -2.0, 0.5]))
    assert np.allclose(mods, [3.0, 2.0, 0.5])
    th = 0.7
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    assert np.allclose(moduli_of_eigenvalues(rot), [1.0, 1.0])


def test_moduli_of_eigenvalues_rejects_singular():
    with pytest.raises(ValueError):
        moduli_of_eigenvalues(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_moduli_product_equals_abs_det(rng):
    g = random_mat(rng, 5)
    mods = moduli_of_eigenvalues(g)
    assert np.prod(mods) == pytest.approx(abs(np.linalg.det(g)), rel=1e-9)


# -- projective metric ----------------------------------------------------------

def test_proj_metric_examples():
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    assert proj_metric(e1, e2) == pytest.approx(1.0)
    assert proj_metric(e1, e1) < 1e-12
    assert proj_metric(e1, -e1) < 1e-12
    diag = np.array([1.0, 1.0])
    assert proj_metric(e1, diag) == pytest.approx(np.sqrt(0.5))


def test_proj_metric_scale_and_phase_invariant(rng):
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    base = proj_metric(u, v)
    assert proj_metric(3.7 * u, v) == pytest.approx(base, abs=1e-12)
    assert proj_metric(u, np.exp(1j * 0.9) * v) == pytest.approx(base, abs=1e-12)
    assert proj_metric(v, u) == pytest.approx(base, abs=1e-12)


def test_proj_metric_range_and_triangle(rng):
    for _ in range(200):
        u, v, w = (rng.standard_normal(4) for _ in range(3))
        duv = proj_metric(u, v)
        assert 0.0 <= duv <= 1.0 + 1e-12
        assert duv <= proj_metric(u, w) + proj_metric(w, v) + 1e-9


def test_proj_metric_accepts_line_subspaces():
    a = Subspace.line(np.array([1.0, 0.0, 0.0]))
    b = Subspace.line(np.array([0.0, 1.0, 0.0]))
    assert proj_metric(a, b) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        proj_metric(Subspace(np.eye(3)[:, :2]), b)


def test_proj_metric_rejects_mismatched_and_zero():
    with pytest.raises(ValueError):
        proj_metric(np.ones(2), np.ones(3))
    with pytest.raises(ValueError):
        proj_metric(np.zeros(3), np.ones(3))


# -- distance to a subspace ------------------------------------------------------

def test_dist_to_subspace_sampled_inf_oracle(rng):
    # brute-force the inf over lines in W; the closed form can only be smaller
    v = rng.standard_normal(5)
    w = Subspace.from_spanning(rng.standard_normal((5, 2)))
    closed = dist_to_subspace(v, w)
    coeffs = rng.standard_normal((5000, 2))
    pts = coeffs @ w.frame.T
    pts = pts[np.linalg.norm(pts, axis=1) > 1e-9]
    sampled = min(proj_metric(v, p) for p in pts)
    assert closed <= sampled + 1e-12
    assert sampled <= closed + 1e-3


def test_dist_to_subspace_extremes():
    w = Subspace(np.eye(3)[:, :2])
    assert dist_to_subspace(np.array([0.0, 0.0, 1.0]), w) == pytest.approx(1.0)
    assert dist_to_subspace(np.array([1.0, 1.0, 0.0]), w) < 1e-12
    with pytest.raises(ValueError):
        dist_to_subspace(np.array([1.0, 0.0, 0.0]), Subspace(np.eye(3)))


# -- subspaces and flags ----------------------------------------------------------

def test_subspace_rejects_non_orthonormal_frame():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        Subspace(np.zeros((3, 4)))


def test_from_spanning_drops_rank_deficiency():
    m = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]])
    w = Subspace.from_spanning(m)
    assert w.dim == 1
    assert dist_to_subspace(np.array([1.0, 0.0, 1.0]), w) < 1e-12
    with pytest.raises(ValueError):
        Subspace.from_spanning(np.zeros((3, 2)))


def test_orthogonal_complement_properties(rng):
    w = Subspace.from_spanning(rng.standard_normal((6, 2)))
    wc = w.orthogonal_complement()
    assert wc.dim == 4
    assert np.allclose(w.frame.conj().T @ wc.frame, 0.0, atol=1e-12)
    assert np.allclose(w.projector() + wc.projector(), np.eye(6), atol=1e-10)
    with pytest.raises(ValueError):
        Subspace(np.eye(3)).orthogonal_complement()


def test_distance_to_agrees_with_proj_metric_on_lines(rng):
    u = rng.standard_normal(4)
    v = rng.standard_normal(4)
    a, b = Subspace.line(u), Subspace.line(v)
    assert a.distance_to(b) == pytest.approx(proj_metric(u, v), abs=1e-10)


def test_flag_validate():
    line = Subspace.line(np.array([1.0, 0.0, 0.0]))
    hyp = hyperplane_from_normal(np.array([0.0, 0.0, 1.0]))
    assert Flag(line, hyp).validate() == Flag(line, hyp)
    with pytest.raises(ValueError):
        Flag(hyp, hyp).validate()
    with pytest.raises(ValueError):
        Flag(line, line).validate()
    short = Subspace.line(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        Flag(short, hyp).validate()


def test_hyperplane_from_normal_is_orthogonal():
    v = np.array([1.0, 2.0, 3.0])
    h = hyperplane_from_normal(v)
    assert h.dim == 2
    assert np.allclose(h.frame.conj().T @ (v / np.linalg.norm(v)), 0.0, atol=1e-12)


# -- Cartan attractors -------------------------------------------------------------

def test_cartan_attractor_diagonal_example():
    g = np.diag([4.0, 1.0, 0.25])
    a1 = cartan_attractor(g, 1)
    assert proj_metric(a1, Subspace.line(np.eye(3)[:, 0])) < 1e-12
    a2 = cartan_attractor(g, 2)
    assert a2.distance_to(Subspace(np.eye(3)[:, :2])) < 1e-12


def test_cartan_attractor_scale_invariant(rng):
    g = random_mat(rng, 4)
    a = cartan_attractor(g, 1)
    b = cartan_attractor(251.0 * g, 1)
    assert a.distance_to(b) < 1e-9


def test_cartan_attractor_rejects_gapless_and_bad_index():
    with pytest.raises(GapTooSmall):
        cartan_attractor(np.eye(3), 1)
    with pytest.raises(ValueError):
        cartan_attractor(np.diag([4.0, 1.0]), 2)
    with pytest.raises(ValueError):
        cartan_attractor(np.diag([4.0, 1.0]), 0)


def test_cartan_attractor_of_inverse_matches_explicit_inverse(rng):
    g = random_mat(rng, 5) @ np.diag([10.0, 5.0, 1.0, 0.2, 0.1])
    for j in (1, 2):
        lhs = cartan_attractor_of_inverse(g, j)
        rhs = cartan_attractor(np.linalg.inv(g), j)
        assert lhs.distance_to(rhs) < 1e-8


def test_cartan_attractor_of_inverse_diagonal():
    g = np.diag([4.0, 1.0, 0.25])
    a = cartan_attractor_of_inverse(g, 1)
    assert proj_metric(a, Subspace.line(np.eye(3)[:, 2])) < 1e-12
    with pytest.raises(GapTooSmall):
        cartan_attractor_of_inverse(np.diag([4.0, 1.0, 1.0]), 1)


# -- contraction and displacement bounds --------------------------------------------

def test_contraction_bound_holds_on_random_input(rng):
    g = np.diag([8.0, 1.0, 0.5]) @ random_mat(rng, 3)
    for _ in range(100):
        x = rng.standard_normal(3)
        chk = contraction_bound_check(g, x)
        assert chk.ok
        assert chk.lhs <= chk.rhs + 1e-12


def test_contraction_bound_infinite_inside_hyperplane():
    g = np.diag([4.0, 1.0, 0.25])
    # the repelling hyperplane of g is span(e2, e3)
    chk = contraction_bound_check(g, np.array([0.0, 1.0, 1.0]))
    assert chk.rhs == np.inf
    assert chk.ok


def test_contraction_bound_rejects_gapless():
    with pytest.raises(GapTooSmall):
        contraction_bound_check(np.eye(2), np.array([1.0, 0.0]))


def test_displacement_bound_random_and_identity(rng):
    for _ in range(20):
        g = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
        chk = near_identity_displacement_check(g, samples=200)
        assert chk.ok
        assert chk.sup_estimate <= chk.bound + 1e-12
    chk = near_identity_displacement_check(np.eye(4), samples=50)
    assert chk.sup_estimate < 1e-12
    assert chk.bound == 0.0


def test_displacement_rejects_singular():
    with pytest.raises(ValueError):
        near_identity_displacement_check(np.diag([1.0, 0.0]))


# -- JSON round trips ----------------------------------------------------------------

def test_mat_json_round_trip_real_and_complex(rng):
    for cf in (False, True):
        m = random_mat(rng, 3, cf)
        back = mat_from_json(mat_to_json(m))
        assert back.dtype == m.dtype
        assert np.array_equal(back, m)


def test_vec_json_round_trip(rng):
    v = rng.standard_normal(4)
    assert np.array_equal(vec_from_json(vec_to_json(v)), v)


def test_mat_json_rejects_malformed():
    good = mat_to_json(np.eye(2))
    for key in ("rows", "cols", "field", "entries"):
        bad = dict(good)
        del bad[key]
        with pytest.raises(ValueError):
            mat_from_json(bad)
    bad = dict(good, field="Q")
    with pytest.raises(ValueError):
        mat_from_json(bad)
    bad = dict(good, entries=[1.0])
    with pytest.raises(ValueError):
        mat_from_json(bad)
    bad = dict(good, entries=[1.0, 0.0, 0.0, np.inf])
    with pytest.raises(ValueError):
        mat_from_json(bad)
    with pytest.raises(ValueError):
        vec_from_json(mat_to_json(np.eye(2)))


@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2 ** 31))
def test_svd_reconstruction_property(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d))
    s, u, vh = svd(g)
    assert np.allclose(u @ np.diag(s) @ vh, g, atol=1e-10)
