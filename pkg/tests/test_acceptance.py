"""Acceptance gate: one test and one printed PASS/FAIL line per criterion."""

import math
import time
from pathlib import Path

import numpy as np

from su2tomo import (HalfInteger, InterferometerParams, IonParams, ProtocolError, RamseyParams,
                     SpherePoint, blockwise_reconstruct, build_grid, coherent_amplitudes,
                     coherent_frame_operator, decompose_two_mode, density_from_multipoles,
                     displaced_probabilities, displacement_dagger, exact_probability_grid, fidelity,
                     glauber_p_check, interferometer_displacement, interferometer_transform,
                     ion_displacement, ion_transform, jc_invert, jc_signal, max_abs_diff,
                     multipoles_from_density, multipoles_from_probabilities, phase_equivalence_error,
                     phase_uncertainty, q_function, qpd_from_multipoles, qpd_from_probabilities,
                     ramsey_displacement, ramsey_transform, random_mixed, random_pure, readout_denominators,
                     rotation_operator, sample_jc_signal, JCReadoutParams, make_coherent, make_dicke)
from su2tomo.config import load_config
from su2tomo.metrology import jz_output_moments
from su2tomo.pipeline import sweep

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
HALF_TO_FIVE = [HalfInteger(tj) for tj in range(1, 11)]


def random_point(rng):
    return SpherePoint(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


def test_criterion_1_convention_lock(acceptance):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    err = 0.0
    for j in HALF_TO_FIVE:
        for _ in range(100):
            n = random_point(rng)
            column = rotation_operator(j, n)[:, 0]
            err = max(err, np.abs(column - coherent_amplitudes(j, n.theta, n.phi)).max())
    dt = time.perf_counter() - t0
    ok = err <= 1e-12 and dt < 5
    assert acceptance(1, ok, f"g(n)|j,j> vs coherent amplitudes, j=1/2..5 x 100 points: "
                             f"max err {err:.2e} (tol 1e-12), {dt:.2f} s (limit 5 s)")


def test_criterion_2_exact_round_trip(acceptance):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst_diff, worst_fid = 0.0, 1.0
    for j in HALF_TO_FIVE:
        grid = build_grid(j)
        states = [random_mixed(j, rng) for _ in range(25)] + [random_pure(j, rng) for _ in range(25)]
        for rho in states:
            est = density_from_multipoles(multipoles_from_probabilities(exact_probability_grid(rho, grid)))
            worst_diff = max(worst_diff, max_abs_diff(est, rho))
            worst_fid = min(worst_fid, fidelity(est, rho))
    dt = time.perf_counter() - t0
    ok = worst_diff <= 1e-9 and worst_fid >= 1 - 1e-9 and dt < 30
    assert acceptance(2, ok, f"exact round trip, 50 states per j=1/2..5: max_abs_diff {worst_diff:.2e} "
                             f"(tol 1e-9), min fidelity 1-{1 - worst_fid:.2e} (tol 1-1e-9), "
                             f"{dt:.2f} s (limit 30 s)")


def test_criterion_3_husimi_identity_and_antipode(acceptance):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    err = 0.0
    for j in HALF_TO_FIVE:
        for _ in range(5):
            rho = random_mixed(j, rng)
            grid = build_grid(j)
            p_top = exact_probability_grid(rho, grid, j)
            husimi = qpd_from_multipoles(multipoles_from_density(rho), -1, grid)
            err = max(err, np.abs(husimi.values - p_top.values).max())
            for _ in range(10):
                n = random_point(rng)
                probs = displaced_probabilities(rho, n)
                antipode = SpherePoint(math.pi - n.theta, (n.phi + math.pi) % (2 * math.pi))
                err = max(err, abs(q_function(rho, n) - probs[0]), abs(q_function(rho, antipode) - probs[-1]))
    dt = time.perf_counter() - t0
    ok = err <= 1e-12 and dt < 5
    assert acceptance(3, ok, f"Q = p_j and p_-j(n) = Q(-n): max err {err:.2e} (tol 1e-12), "
                             f"{dt:.2f} s (limit 5 s)")


def test_criterion_4_kernel_vs_multipole(acceptance):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    gap, ident = 0.0, 0.0
    for j in HALF_TO_FIVE:
        rho = random_mixed(j, rng)
        grid = build_grid(j)
        R = multipoles_from_density(rho)
        for two_mu in range(j.twice_value, -j.twice_value - 1, -2):
            mu = HalfInteger(two_mu)
            if np.abs(readout_denominators(j, mu)).min() < 1e-8:
                continue
            p = exact_probability_grid(rho, grid, mu)
            for s in (-1, 0, 1):
                by_kernel = qpd_from_probabilities(p, s)
                gap = max(gap, np.abs(by_kernel.values - qpd_from_multipoles(R, s, grid).values).max())
        p_top = exact_probability_grid(rho, grid, j)
        ident = max(ident, np.abs(qpd_from_probabilities(p_top, -1).values - p_top.values).max())
    dt = time.perf_counter() - t0
    ok = gap <= 1e-9 and ident <= 1e-10 and dt < 10
    assert acceptance(4, ok, f"kernel vs multipole route: max gap {gap:.2e} (tol 1e-9); "
                             f"s=-1, mu=j kernel identity {ident:.2e} (tol 1e-10), {dt:.2f} s (limit 10 s)")


def test_criterion_5_wigner_and_glauber(acceptance):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    norm_err, overlap_err, glauber_err = 0.0, 0.0, 0.0
    for j in HALF_TO_FIVE:
        grid = build_grid(j)
        for _ in range(5):
            a, b = random_mixed(j, rng), random_mixed(j, rng)
            wa = qpd_from_multipoles(multipoles_from_density(a), 0, grid)
            wb = qpd_from_multipoles(multipoles_from_density(b), 0, grid)
            norm_err = max(norm_err, abs(wa.normalization() - 1.0))
            overlap = j.dim / (4 * math.pi) * grid.integrate(wa.values * wb.values)
            overlap_err = max(overlap_err, abs(overlap - np.trace(a.matrix @ b.matrix).real))
            pa = qpd_from_multipoles(multipoles_from_density(a), 1, grid)
            glauber_err = max(glauber_err, glauber_p_check(a, pa))
    dt = time.perf_counter() - t0
    ok = norm_err <= 1e-10 and overlap_err <= 1e-9 and glauber_err <= 1e-9 and dt < 10
    assert acceptance(5, ok, f"Wigner normalization err {norm_err:.2e} (tol 1e-10), overlap rule err "
                             f"{overlap_err:.2e} (tol 1e-9), Glauber reassembly err {glauber_err:.2e} "
                             f"(tol 1e-9), {dt:.2f} s (limit 10 s)")


def test_criterion_6_resolution_of_identity(acceptance):
    t0 = time.perf_counter()
    err = 0.0
    for j in [HalfInteger(tj) for tj in range(0, 11)]:
        err = max(err, np.abs(coherent_frame_operator(j, build_grid(j)) - np.eye(j.dim)).max())
    dt = time.perf_counter() - t0
    ok = err <= 1e-10 and dt < 5
    assert acceptance(6, ok, f"resolution of identity on the minimal grid, j<=5: max deviation {err:.2e} "
                             f"(tol 1e-10), {dt:.2f} s (limit 5 s)")


def test_criterion_7_shot_noise_scaling(acceptance):
    cfg = load_config(CONFIG_DIR / "coherent_j1_sweep.json")
    t0 = time.perf_counter()
    result = sweep(cfg, [100, 1000, 10000, 100000, 1000000], 20)
    dt = time.perf_counter() - t0
    slope = result["slope"]
    ok = -0.6 <= slope <= -0.4 and dt < 180 and cfg.j == HalfInteger(2)
    medians = ", ".join(f"{r['median']:.2e}" for r in result["levels"])
    assert acceptance(7, ok, f"j=1 coherent, shots 1e2..1e6 x 20 seeds: slope {slope:.4f} "
                             f"(range [-0.6, -0.4]), medians [{medians}], {dt:.2f} s (limit 180 s)")


def _random_frontend_cases(rng):
    """Random physical parameters whose raw rotation angles already lie in [0,pi] x [0,2pi)."""
    theta, phi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
    omega0, omega2, big_t = rng.uniform(0.5, 5), rng.uniform(0.5, 5), rng.uniform(0.5, 3)
    ramsey = RamseyParams(omega0, omega0 + phi / big_t, big_t, -omega2, theta / omega2)
    offset = rng.uniform(-3, 3)
    mz = InterferometerParams(1.0, math.cos(theta / 2) ** 2, offset, offset - phi, orientation=-1)
    kappa, eta1, eta2 = rng.uniform(1, 10), rng.uniform(0.01, 0.1), rng.uniform(0.01, 0.1)
    omega1, big_t = rng.uniform(0.5, 2), rng.uniform(0.5, 3)
    ion = IonParams(kappa, eta1, eta2, omega1, omega1 + phi / big_t, theta / (2 * kappa * eta1 * eta2), big_t)
    return ramsey, mz, ion


def test_criterion_8_frontend_equivalence(acceptance):
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    strict, phase = 0.0, 0.0
    pairs = ((ramsey_transform, ramsey_displacement), (interferometer_transform, interferometer_displacement),
             (ion_transform, ion_displacement))
    for _ in range(100):
        j = HalfInteger(int(rng.integers(1, 11)))
        cases = _random_frontend_cases(rng)
        for (transform, forward), params in zip(pairs, cases):
            strict = max(strict, np.abs(transform(j, params) - displacement_dagger(j, forward(params))).max())
        # unconstrained parameters: equal up to a diagonal phase the readout cannot see
        free = (RamseyParams(*rng.uniform(0.1, 5, 3), rng.uniform(-5, 5), rng.uniform(0.1, 5)),
                InterferometerParams(1.0, rng.uniform(), *rng.uniform(-9, 9, 2), orientation=int(rng.choice([-1, 1]))),
                IonParams(rng.uniform(-9, 9), 0.05, 0.05, 1.0, rng.uniform(1.5, 3), *rng.uniform(0.1, 20, 2)))
        for (transform, forward), params in zip(pairs, free):
            phase = max(phase, phase_equivalence_error(transform(j, params), displacement_dagger(j, forward(params))))
    try:
        ramsey_displacement(RamseyParams(1.0, 0.5, 1.0, 1.0, 1.0, first_pulse_on=True, omega1=1.0))
        rejected = False
    except ProtocolError:
        rejected = True
    dt = time.perf_counter() - t0
    ok = strict <= 1e-12 and phase <= 1e-12 and rejected and dt < 10
    assert acceptance(8, ok, f"Ramsey, Mach-Zehnder, ion unitaries vs g^dagger(n), 100 sets each: "
                             f"max err {strict:.2e}, unconstrained sets up to diagonal phase {phase:.2e} "
                             f"(tol 1e-12); first pulse rejected: {rejected}, {dt:.2f} s (limit 10 s)")


def test_criterion_9_two_mode_blocks(acceptance):
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    amps = {}
    for n_total in range(5):
        for n1 in range(n_total + 1):
            amps[(n1, n_total - n1)] = complex(*rng.normal(size=2))
    norm = math.sqrt(sum(abs(v) ** 2 for v in amps.values()))
    state = decompose_two_mode({k: v / norm for k, v in amps.items()})
    exact = blockwise_reconstruct(state)
    exact_err = max(r.metrics["max_abs_diff"] for r in exact.values())
    shots = 10 ** 5
    sampled = blockwise_reconstruct(state, shots=shots, seed=9)
    n_nodes = len(build_grid(max(state.js)))
    z = max(abs(r.weight_estimate - r.weight) / math.sqrt(r.weight * (1 - r.weight) / (shots * n_nodes))
            for r in sampled.values())
    dt = time.perf_counter() - t0
    ok = len(exact) == 5 and exact_err <= 1e-9 and z <= 3 and dt < 60
    assert acceptance(9, ok, f"two-mode blocks j=0..2: exact max_abs_diff {exact_err:.2e} (tol 1e-9); "
                             f"weights at 1e5 shots/node within {z:.2f} sigma (tol 3), {dt:.2f} s (limit 60 s)")


def test_criterion_10_jc_inversion(acceptance):
    rng = np.random.default_rng(10)
    t0 = time.perf_counter()
    noiseless = 0.0
    for n_max in range(9):
        params = JCReadoutParams(1.0, np.linspace(0, 20, 400), n_max, gamma0=0.02)
        pops = rng.dirichlet(np.ones(n_max + 1))
        noiseless = max(noiseless, np.abs(jc_invert(jc_signal(pops, params), params).populations - pops).max())
    params = JCReadoutParams(1.0, np.linspace(0, 20, 400), 6, gamma0=0.02)
    pops = rng.dirichlet(np.ones(7))
    errs = [np.abs(jc_invert(sample_jc_signal(pops, params, 10 ** 4, seed), params).populations - pops).max()
            for seed in range(20)]
    median = float(np.median(errs))
    dt = time.perf_counter() - t0
    ok = noiseless <= 1e-6 and median <= 1e-2 and dt < 30
    assert acceptance(10, ok, f"JC inversion: noiseless max |dP| {noiseless:.2e} for n_max<=8 (tol 1e-6); "
                              f"1e4 shots median max |dP| {median:.2e} over 20 seeds (tol 1e-2), "
                              f"{dt:.2f} s (limit 30 s)")


def test_criterion_11_phase_uncertainty(acceptance):
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    limit_err, fd_err = 0.0, 0.0
    for j in range(1, 11):
        rho = make_dicke(j, j)
        dphi = phase_uncertainty(rho, math.pi / 2, -math.pi / 2, math.pi / 2)
        limit_err = max(limit_err, abs(dphi - 1 / math.sqrt(2 * j)))
        for _ in range(3):
            state = make_coherent(j, random_point(rng))
            t1, t2, phi = rng.uniform(-3, 3, 3)
            _, _, deriv = jz_output_moments(state, t1, t2, phi)
            h = 1e-5
            fd = (jz_output_moments(state, t1, t2, phi + h)[0]
                  - jz_output_moments(state, t1, t2, phi - h)[0]) / (2 * h)
            fd_err = max(fd_err, abs(deriv - fd) / max(abs(deriv), 1.0))
    dt = time.perf_counter() - t0
    ok = limit_err <= 1e-10 and fd_err <= 1e-6 and dt < 5
    assert acceptance(11, ok, f"coherent-state dphi vs 1/sqrt(2j), j=1..10: err {limit_err:.2e} (tol 1e-10); "
                              f"derivative vs finite difference rel err {fd_err:.2e} (tol 1e-6), "
                              f"{dt:.2f} s (limit 5 s)")
