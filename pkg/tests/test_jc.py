import numpy as np
import pytest

from su2tomo import DomainError, JCInversionError, JCReadoutParams, jc_invert, jc_signal, sample_jc_signal
from su2tomo.jc import jc_design_matrix


def params(n_max=5, gamma0=0.0, count=400, t_max=20.0, **kw):
    return JCReadoutParams(1.0, np.linspace(0, t_max, count), n_max, gamma0=gamma0, **kw)


def test_signal_examples():
    p = params(3)
    assert jc_signal([1, 0, 0, 0], p)[0] == pytest.approx(1.0)
    single = JCReadoutParams(1.3, np.linspace(0, 5, 50), 0)
    np.testing.assert_allclose(jc_signal([1.0], single), 0.5 * (1 + np.cos(2 * 1.3 * single.times)), atol=1e-15)
    late = JCReadoutParams(1.0, [0.0, 1e4], 2, gamma0=0.5)
    assert jc_signal([0.5, 0.3, 0.2], late)[-1] == pytest.approx(0.5)


def test_signal_validation():
    p = params(2)
    with pytest.raises(DomainError):
        jc_signal([-0.1, 0.5, 0.5], p)
    with pytest.raises(DomainError):
        jc_signal([0.6, 0.5, 0.1], p)
    with pytest.raises(DomainError):
        jc_signal([1.0], p)
    with pytest.raises(DomainError):
        JCReadoutParams(1.0, [0.0, 2.0, 1.0], 2)


@pytest.mark.parametrize("n_max", range(0, 9))
def test_forward_inverse(n_max, rng):
    p = params(n_max, gamma0=0.01)
    pops = rng.dirichlet(np.ones(n_max + 1))
    inv = jc_invert(jc_signal(pops, p), p)
    assert np.abs(inv.populations - pops).max() < 1e-6
    assert inv.residual_norm < 1e-9


def test_inversion_examples():
    p = params(4)
    np.testing.assert_allclose(jc_invert(np.full(400, 0.5), p).populations, 0.0, atol=1e-12)
    inv = jc_invert(jc_signal([0, 1, 0, 0, 0], p), p)
    assert inv.populations[1] == pytest.approx(1.0, abs=1e-6)
    lsq = jc_invert(jc_signal([0, 1, 0, 0, 0], p), p, method="lstsq")
    assert lsq.populations[1] == pytest.approx(1.0, abs=1e-6)


def test_ill_conditioned_design_raises():
    p = JCReadoutParams(1.0, np.linspace(0, 1e-4, 12), 8)
    with pytest.raises(JCInversionError, match="longer or denser"):
        jc_invert(np.full(12, 0.5), p)


def test_custom_rabi_and_decay_tables():
    rabi = np.array([1.0, 1.5, 2.2])
    gammas = np.array([0.0, 0.1, 0.2])
    p = JCReadoutParams(1.0, np.linspace(0, 10, 30), 2, gammas=gammas, rabi=rabi)
    m = jc_design_matrix(p)
    np.testing.assert_allclose(m[:, 2], 0.5 * np.cos(2 * 2.2 * p.times) * np.exp(-0.2 * p.times))


def test_sampled_inversion_accuracy(rng):
    p = params(5, gamma0=0.01)
    pops = rng.dirichlet(np.ones(6))
    errs = [np.abs(jc_invert(sample_jc_signal(pops, p, 10 ** 4, seed=s), p).populations - pops).max()
            for s in range(20)]
    assert np.median(errs) < 1e-2
    np.testing.assert_array_equal(sample_jc_signal(pops, p, 100, 5), sample_jc_signal(pops, p, 100, 5))
