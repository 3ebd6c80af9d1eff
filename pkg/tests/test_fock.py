import numpy as np
import pytest
from scipy.linalg import expm

from su2tomo import DomainError, HalfInteger, fock_to_su2, spin_matrices, su2_to_fock
from su2tomo.fock import block_basis, mode_transform_block, schwinger_generators


def test_fock_examples():
    assert fock_to_su2(2, 0) == (HalfInteger(2), HalfInteger(2))
    assert fock_to_su2(1, 1) == (HalfInteger(2), HalfInteger(0))
    for n1 in range(7):
        for n2 in range(7):
            assert su2_to_fock(*fock_to_su2(n1, n2)) == (n1, n2)
    with pytest.raises(DomainError):
        su2_to_fock(1, 2)
    with pytest.raises(DomainError):
        fock_to_su2(-1, 0)


def test_block_basis_order():
    assert block_basis(2) == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("n_total", range(0, 7))
def test_schwinger_generators_match_spin_matrices(n_total):
    ours = schwinger_generators(n_total)
    for a, b in zip(ours, spin_matrices(HalfInteger(n_total))):
        np.testing.assert_allclose(a, b, atol=1e-13)


def test_mode_transform_of_rotation(rng):
    # exp(-i beta J_y) acting on states corresponds to the real mode rotation
    for n_total in range(1, 6):
        beta = rng.uniform(-3, 3)
        c, s = np.cos(beta / 2), np.sin(beta / 2)
        jy = spin_matrices(HalfInteger(n_total))[1]
        op = mode_transform_block(np.array([[c, -s], [s, c]]), n_total)
        np.testing.assert_allclose(op, expm(-1j * beta * jy), atol=1e-12)


def test_mode_transform_unitary(rng):
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    op = mode_transform_block(q, 4)
    np.testing.assert_allclose(op.conj().T @ op, np.eye(5), atol=1e-12)
