import math

import numpy as np
import pytest

from su2tomo import HalfInteger, StationaryPointError, make_coherent, make_dicke, phase_uncertainty, random_mixed, SpherePoint
from su2tomo.metrology import interferometer_operator, jz_output_moments
from su2tomo.su2 import spin_matrices


@pytest.mark.parametrize("j", range(1, 11))
def test_shot_noise_limit(j):
    dphi = phase_uncertainty(make_dicke(j, j), math.pi / 2, -math.pi / 2, math.pi / 2)
    assert dphi == pytest.approx(1 / math.sqrt(2 * j), abs=1e-10)


def test_analytic_derivative_matches_finite_difference(rng):
    for tj in range(1, 9):
        rho = random_mixed(HalfInteger(tj), rng)
        t1, t2, phi = rng.uniform(-3, 3, 3)
        _, _, deriv = jz_output_moments(rho, t1, t2, phi)
        h = 1e-5
        fd = (jz_output_moments(rho, t1, t2, phi + h)[0] - jz_output_moments(rho, t1, t2, phi - h)[0]) / (2 * h)
        assert deriv == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_moments_against_brute_force(rng):
    j = HalfInteger(4)
    rho = random_mixed(j, rng)
    u = interferometer_operator(j, 0.3, -1.2, 0.8)
    jz = spin_matrices(j)[2]
    out = u @ jz @ u.conj().T
    mean, var, _ = jz_output_moments(rho, 0.3, -1.2, 0.8)
    assert mean == pytest.approx(np.trace(rho.matrix @ out).real)
    assert var == pytest.approx(np.trace(rho.matrix @ out @ out).real - mean ** 2)


def test_stationary_point():
    with pytest.raises(StationaryPointError):
        phase_uncertainty(make_dicke(2, 2), 0.0, 0.0, 0.3)
    assert phase_uncertainty(make_coherent(1, SpherePoint(0.0, 0.0)), math.pi / 2, -math.pi / 2, math.pi / 2) > 0
