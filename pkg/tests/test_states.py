import math

import numpy as np
import pytest

from su2tomo import (DensityMatrix, DomainError, HalfInteger, SpherePoint, StateVector, as_density,
                     make_coherent, make_dicke, make_mixture, make_superposition, random_mixed,
                     random_pure, rotation_operator)

from conftest import ALL_J, j_id, random_points


def test_dicke_examples():
    np.testing.assert_array_equal(make_dicke(1, 1).amplitudes, [1, 0, 0])
    np.testing.assert_array_equal(make_dicke("1/2", "-1/2").amplitudes, [0, 1])
    with pytest.raises(DomainError):
        make_dicke(1, 2)


def test_coherent_poles():
    j = HalfInteger(5)
    assert abs(make_coherent(j, SpherePoint(0.0, 1.3)).amplitudes[0]) == pytest.approx(1.0)
    assert abs(make_coherent(j, SpherePoint(math.pi, 0.0)).amplitudes[-1]) == pytest.approx(1.0)


@pytest.mark.parametrize("j", ALL_J, ids=j_id)
def test_coherent_overlap_law_and_convention_lock(j, rng):
    pts = random_points(rng, 6)
    for a, b in zip(pts[:3], pts[3:]):
        ov = abs(make_coherent(j, a).overlap(make_coherent(j, b))) ** 2
        assert ov == pytest.approx(((1 + a.unit_vector @ b.unit_vector) / 2) ** j.twice_value, abs=1e-12)
        np.testing.assert_allclose(make_coherent(j, a).amplitudes,
                                   rotation_operator(j, a) @ make_dicke(j, j).amplitudes, atol=1e-12)


def test_superposition():
    psi = make_superposition("1/2", [1, 1])
    np.testing.assert_allclose(psi.amplitudes, [1 / math.sqrt(2)] * 2)
    again = make_superposition("1/2", psi.amplitudes)
    np.testing.assert_allclose(again.amplitudes, psi.amplitudes, atol=1e-15)
    with pytest.raises(DomainError):
        make_superposition(1, [0, 0, 0])
    with pytest.raises(DomainError):
        make_superposition(1, [1, 0])


def test_mixture():
    j = HalfInteger(3)
    psi = make_coherent(j, SpherePoint(0.3, 0.2))
    np.testing.assert_allclose(make_mixture([(2.0, psi)]).matrix, psi.density().matrix, atol=1e-15)
    flat = make_mixture([(1.0, make_dicke(j, HalfInteger(tm))) for tm in (3, 1, -1, -3)])
    np.testing.assert_allclose(flat.matrix, np.eye(4) / 4, atol=1e-15)
    assert np.all(flat.eigenvalues() >= 0)
    with pytest.raises(DomainError):
        make_mixture([(1.0, make_dicke(1, 1)), (1.0, make_dicke("1/2", "1/2"))])
    with pytest.raises(DomainError):
        make_mixture([(0.0, make_dicke(1, 1))])


def test_density_validation():
    with pytest.raises(DomainError):
        DensityMatrix(1, np.eye(3))
    with pytest.raises(DomainError):
        DensityMatrix("1/2", np.array([[1.2, 0], [0, -0.2]]))
    with pytest.raises(DomainError):
        DensityMatrix("1/2", np.array([[0.5, 0.1], [0.3, 0.5]]))
    bad = DensityMatrix(1, np.eye(3), check=False)
    assert not bad.is_physical and bad.violations()
    with pytest.raises(DomainError):
        StateVector(1, [1, 1, 0])


@pytest.mark.parametrize("j", ALL_J, ids=j_id)
def test_random_states_are_valid(j, rng):
    for rank in (None, 1, j.dim):
        rho = random_mixed(j, rng, rank=rank)
        assert rho.is_physical
    psi = random_pure(j, rng)
    assert as_density(psi).purity() == pytest.approx(1.0)
