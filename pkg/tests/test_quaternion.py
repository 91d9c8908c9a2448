"""Quaternion arithmetic and the 2x2 complex block realization."""

import numpy as np
import pytest

from anosovcert.quaternion import Quaternion, QuatMat, complexify


def random_quat(rng):
    return Quaternion(*rng.standard_normal(4))


def random_quat_mat(rng, n):
    return QuatMat([[random_quat(rng) for _ in range(n)] for _ in range(n)])


# -- scalar arithmetic ---------------------------------------------------------

def test_basis_multiplication_table():
    i = Quaternion(0, 1, 0, 0)
    j = Quaternion(0, 0, 1, 0)
    k = Quaternion(0, 0, 0, 1)
    one = Quaternion(1)
    assert i * i == -one and j * j == -one and k * k == -one
    assert i * j == k and j * k == i and k * i == j
    assert j * i == -k and k * j == -i and i * k == -j
    assert (i * j) * k == -one


def test_associativity_and_distributivity(rng):
    for _ in range(200):
        p, q, r = (random_quat(rng) for _ in range(3))
        assert ((p * q) * r).is_close(p * (q * r), tol=1e-10)
        assert (p * (q + r)).is_close(p * q + p * r, tol=1e-10)


def test_real_scalars_embed_centrally(rng):
    q = random_quat(rng)
    assert (2.5 * q).is_close(q * 2.5)
    assert (q + 1).is_close(1 + q)
    assert (q - 0.5).is_close(-(0.5 - q))


def test_norm_is_multiplicative(rng):
    for _ in range(200):
        p, q = random_quat(rng), random_quat(rng)
        assert (p * q).norm() == pytest.approx(p.norm() * q.norm(), rel=1e-12)


def test_inverse_and_conjugate():
    q = Quaternion(1, 2, 3, 4)
    assert (q * q.inverse()).is_close(Quaternion(1))
    assert (q.inverse() * q).is_close(Quaternion(1))
    assert (q * q.conjugate()).is_close(Quaternion(q.norm() ** 2))
    with pytest.raises(ZeroDivisionError):
        Quaternion().inverse()


# -- block realization ----------------------------------------------------------

def test_block_convention_top_left():
    # j maps to [[0, 1], [-1, 0]] and i to diag(i, -i)
    assert np.array_equal(Quaternion(0, 0, 1, 0).to_block(),
                          np.array([[0, 1], [-1, 0]], dtype=np.complex128))
    assert np.array_equal(Quaternion(0, 1, 0, 0).to_block(),
                          np.diag([1j, -1j]))
    assert np.array_equal(Quaternion(1).to_block(), np.eye(2, dtype=np.complex128))


def test_block_is_ring_homomorphism(rng):
    for _ in range(1000):
        p, q = random_quat(rng), random_quat(rng)
        assert np.allclose((p * q).to_block(), p.to_block() @ q.to_block(), atol=1e-10)
        assert np.allclose((p + q).to_block(), p.to_block() + q.to_block(), atol=1e-12)


def test_block_sends_conjugate_to_adjoint(rng):
    q = random_quat(rng)
    assert np.allclose(q.conjugate().to_block(), q.to_block().conj().T, atol=1e-12)


def test_block_determinant_is_squared_norm(rng):
    q = random_quat(rng)
    assert np.linalg.det(q.to_block()).real == pytest.approx(q.norm() ** 2, rel=1e-12)


# -- quaternionic matrices ---------------------------------------------------------

def test_quat_mat_validation():
    with pytest.raises(ValueError):
        QuatMat([])
    with pytest.raises(ValueError):
        QuatMat([[1, 2], [3]])
    with pytest.raises(ValueError):
        QuatMat.identity(2) @ QuatMat.identity(3)


def test_quat_mat_identity_and_diag():
    m = QuatMat.diag([2, Quaternion(0, 1, 0, 0)])
    assert (QuatMat.identity(2) @ m).is_close(m)
    assert m.entries[0][1] == Quaternion()
    assert m.entries[1][1] == Quaternion(0, 1, 0, 0)


def test_complexify_is_multiplicative(rng):
    for _ in range(50):
        a = random_quat_mat(rng, 3)
        b = random_quat_mat(rng, 3)
        assert np.allclose(complexify(a @ b), complexify(a) @ complexify(b), atol=1e-10)


def test_complexify_adjoint_and_shape(rng):
    a = random_quat_mat(rng, 2)
    ca = complexify(a)
    assert ca.shape == (4, 4)
    assert np.allclose(complexify(a.conjugate_transpose()), ca.conj().T, atol=1e-12)
    assert np.array_equal(complexify(QuatMat.identity(3)), np.eye(6, dtype=np.complex128))
