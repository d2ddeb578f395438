"""Acceptance suite: every laboratory-level criterion at its stated tolerance.

Default resolution throughout: L = 256, n_points = 4096, K = 1024 modes.
Each test prints one PASS/FAIL line (visible with pytest -s).
"""

import numpy as np
import pytest
from scipy.integrate import quad

import bolab
from bolab import FlowConfig, NormSpec, SolitonConfig, band_limited_noise
from bolab.lax import bound_states


def criterion(num, desc, passed, detail):
    print(f"[AC{num:02d}] {desc}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"AC{num:02d} {desc}: {detail}"


@pytest.fixture(scope="module")
def scaled_system(grid):
    u = 1.2 * bolab.single_soliton(-0.5, 0.0, grid)
    sys = bolab.assemble(u, 1024)
    return sys, bolab.eigensolve(sys)


@pytest.fixture(scope="module")
def noisy_system(grid, soliton_field):
    u = soliton_field + band_limited_noise(grid, 8.0, seed=7,
                                           spec=NormSpec(0.0), delta=0.3)
    sys = bolab.assemble(u, 1024)
    return sys, bolab.eigensolve(sys)


@pytest.fixture(scope="module")
def triple_system(grid):
    cfg = SolitonConfig(np.array([-0.8, -0.5, -0.25]), np.array([-12.0, 0.0, 12.0]))
    sys = bolab.assemble(bolab.profile(cfg, grid), 1024)
    return cfg, sys, bolab.eigensolve(sys)


def test_c01_lax_eigenvalue_recovery(soliton_data, pair_data):
    neg1 = soliton_data.eigenvalues[soliton_data.eigenvalues < -0.05]
    neg2 = pair_data.eigenvalues[pair_data.eigenvalues < -0.05]
    err1 = abs(neg1[0] + 0.5) if neg1.size == 1 else np.inf
    err2 = np.max(np.abs(neg2 - [-1.0, -0.5])) if neg2.size == 2 else np.inf
    criterion(
        1, "Lax eigenvalue recovery",
        neg1.size == 1 and err1 < 1e-3 and neg2.size == 2 and err2 < 1e-3,
        f"single: {neg1.size} state(s), err {err1:.2e}; "
        f"pair: {neg2.size} state(s), err {err2:.2e}; tol 1e-3",
    )


def test_c02_wu_relation(soliton_system, soliton_data, pair_system, pair_data,
                         scaled_system):
    worst = 0.0
    for sys, data in [(soliton_system, soliton_data), (pair_system, pair_data),
                      scaled_system]:
        rep = bolab.wu_check(data, sys)
        worst = max(worst, float(np.max(np.abs(rep.ratios - 1))))
    # closed-form oracle: u = 2/(1+x^2), f = (i/pi)/(x+i); both sides equal 1
    re, _ = quad(lambda x: 2 / (1 + x * x) * 1 / (np.pi * (1 + x * x)), -np.inf, np.inf)
    im, _ = quad(lambda x: 2 / (1 + x * x) * x / (np.pi * (1 + x * x)), -np.inf, np.inf)
    lhs = abs(re + 1j * im) ** 2
    nrm, _ = quad(lambda x: 1 / (np.pi**2 * (1 + x * x)), -np.inf, np.inf)
    rhs = 2 * np.pi * 0.5 * nrm
    oracle_ok = abs(lhs - 1) < 1e-10 and abs(rhs - 1) < 1e-10
    criterion(
        2, "Wu relation",
        worst < 1e-2 and oracle_ok,
        f"max |ratio-1| = {worst:.2e} over 3 fields, tol 1e-2; "
        f"closed-form both sides = ({lhs:.12f}, {rhs:.12f})",
    )


def test_c03_second_wu_relation(soliton_system, soliton_data, pair_system,
                                pair_data):
    r1 = bolab.second_wu_check(soliton_data, soliton_system)
    r2 = bolab.second_wu_check(pair_data, pair_system)
    worst = max(float(np.max(r1)), float(np.max(r2)))
    oracle = np.sqrt(2 * np.pi) / np.pi  # fhat(0+) of the closed-form eigenfunction
    identity = abs(np.sqrt(2 * np.pi) * (-0.5) * oracle + 1.0)
    criterion(
        3, "second Wu relation",
        worst < 5e-2 and identity < 1e-14,
        f"max residual {worst:.2e}, tol 5e-2; oracle fhat(0+) = sqrt(2pi)/pi "
        f"closes the identity to {identity:.1e}",
    )


def test_c04_variational_identity(grid, soliton_system, soliton_data,
                                  pair_system, pair_data, triple_system):
    cfg3, sys3, data3 = triple_system
    cases = [
        ([-0.5], soliton_system, soliton_data),
        ([-1.0, -0.5], pair_system, pair_data),
        (list(cfg3.lambdas), sys3, data3),
    ]
    worst = 0.0
    used = []
    for lams, sys, data in cases:
        for kappa in (1.0, 2.0, 4.0, 8.0):
            if kappa + min(lams) < 0.1:  # target pole; inadmissible
                continue
            b = bolab.beta(sys, kappa)
            target = sum(2 * np.pi * abs(l) / (l + kappa) for l in lams)
            worst = max(worst, abs(b - target) / b)
            used.append((len(lams), kappa))
    spot1 = abs(bolab.beta(soliton_system, 2.0) - 2 * np.pi / 3) / (2 * np.pi / 3)
    spot2 = abs(bolab.beta(pair_system, 2.0) - 8 * np.pi / 3) / (8 * np.pi / 3)
    criterion(
        4, "variational identity",
        worst < 1e-2 and spot1 < 1e-2 and spot2 < 1e-2,
        f"max rel gap {worst:.2e} over {len(used)} (N,kappa) pairs, tol 1e-2; "
        f"spot beta(2)=2pi/3 rel {spot1:.1e}, 8pi/3 rel {spot2:.1e}",
    )


def test_c05_variational_inequality(noisy_system, soliton_system, soliton_data,
                                    pair_system, pair_data):
    sys_n, data_n = noisy_system
    neg = data_n.eigenvalues[bound_states(data_n)]
    gaps = []
    for kappa in (1.0, 2.0, 4.0, 8.0):
        if kappa + float(neg.min()) < 0.1:
            continue
        target = float(np.sum(2 * np.pi * np.abs(neg) / (neg + kappa)))
        gaps.append(bolab.beta(sys_n, kappa) - target)
    span_noisy = bolab.span_residual(data_n, sys_n)
    span_1 = bolab.span_residual(soliton_data, soliton_system)
    span_2 = bolab.span_residual(pair_data, pair_system)
    criterion(
        5, "variational inequality and span condition",
        min(gaps) > 0 and span_noisy > 0.05 and span_1 < 5e-2 and span_2 < 5e-2,
        f"min gap {min(gaps):.2e} > 0; span(noisy) {span_noisy:.3f} > 0.05; "
        f"span(multisolitons) {span_1:.1e}, {span_2:.1e} < 5e-2",
    )


def test_c06_conserved_quantities(grid, soliton_system):
    en = bolab.conserved_energies(soliton_system, 1)
    err0 = abs(en[0] - np.pi)
    err1 = abs(en[1] + np.pi / 2)
    ctrl = band_limited_noise(grid, 5.0, seed=6, spec=NormSpec(0.0), delta=1.0)
    sys_c = bolab.assemble(ctrl, 1024)
    e1_mat = bolab.conserved_energies(sys_c, 1)[1]
    e1_grid = bolab.grid_energy(ctrl)
    cross = abs(e1_mat - e1_grid) / abs(e1_grid)
    criterion(
        6, "conserved quantities",
        err0 < 1e-3 and err1 < 1e-2 and cross < 1e-6,
        f"E0 err {err0:.2e} (tol 1e-3), E1 err {err1:.2e} (tol 1e-2), "
        f"grid/operator energy rel diff {cross:.2e} (tol 1e-6)",
    )


def test_c07_flow_conservation(grid):
    u0 = bolab.single_soliton(-0.5, 0.0, grid)
    traj = bolab.evolve(u0, FlowConfig(dt=1e-3, t_end=10.0, monitor_stride=1000,
                                       kappa_monitor=2.0))
    cons = bolab.conservation_report(traj)
    d0 = cons["E0"]["max_relative_drift"]
    d1 = cons["E1"]["max_relative_drift"]
    db = cons["beta(2)"]["max_relative_drift"]
    # 4th-order check where truncation dominates (1e-3 sits at the roundoff floor)
    coarse = []
    for dt in (8e-3, 4e-3):
        t = bolab.evolve(u0, FlowConfig(dt=dt, t_end=10.0, monitor_stride=10**9,
                                        monitor_beta=False))
        coarse.append(bolab.conservation_report(t)["E1"]["max_relative_drift"])
    ratio = coarse[0] / coarse[1]
    criterion(
        7, "flow conservation",
        d0 < 1e-8 and d1 < 1e-7 and db < 1e-6 and 10 < ratio < 100,
        f"drifts E0 {d0:.1e} (<1e-8), E1 {d1:.1e} (<1e-7), beta {db:.1e} (<1e-6); "
        f"dt-halving drift ratio {ratio:.1f} (4th order => >= 16)",
    )


def test_c08_exact_solution_reproduction(grid):
    cfg = SolitonConfig(np.array([-1.0, -0.5]), np.array([-20.0, 20.0]))
    u0 = bolab.profile(cfg, grid)
    traj = bolab.evolve(u0, FlowConfig(dt=1e-3, t_end=40.0, monitor_stride=100,
                                       monitor_beta=False))
    worst = 0.0
    centers = []
    for t, snap in zip(traj.times, traj.snapshots):
        ref = bolab.profile(cfg, grid, float(t))
        num = np.sqrt(np.sum((snap.samples - ref.samples) ** 2) * grid.dx)
        den = np.sqrt(np.sum(ref.samples**2) * grid.dx)
        worst = max(worst, num / den)
        if t <= 20.0:
            res = bolab.fit(snap, cfg.lambdas, start=cfg.at_time(float(t)).centers)
            centers.append((float(t), res.centers))
    times = np.array([c[0] for c in centers])
    ctr = np.array([c[1] for c in centers])
    speed_err = 0.0
    for j, lam in enumerate(cfg.lambdas):
        slope = np.polyfit(times, ctr[:, j], 1)[0]
        speed_err = max(speed_err, abs(slope - 2 * abs(lam)))
    criterion(
        8, "exact-solution reproduction",
        worst < 1e-3 and speed_err < 1e-2,
        f"max rel L2 error {worst:.2e} over {traj.times.size} monitor times "
        f"(tol 1e-3); max speed error {speed_err:.2e} (tol 1e-2)",
    )


def test_c09_residue_structure(pair_system, pair_data):
    errs = []
    for lam in (-1.0, -0.5):
        resid, expect = bolab.residue_probe(pair_system, pair_data, lam)
        errs.append(abs(resid - expect) / expect)
    criterion(
        9, "beta residue structure",
        max(errs) < 1e-2,
        f"residue rel errors {errs[0]:.2e}, {errs[1]:.2e} vs 2pi|lambda|, tol 1e-2",
    )


def test_c10_molecular_decomposition(grid):
    p1 = SolitonConfig(np.array([-1.0]), np.array([0.0]))
    p2 = SolitonConfig(np.array([-0.5]), np.array([0.0]))
    l2n, hmn, fitted = [], [], []
    for X in (10.0, 20.0, 40.0):
        total, merged = bolab.molecular_superposition([(p1, -X), (p2, X)], grid)
        diff = total - bolab.profile(merged, grid)
        l2n.append(bolab.sobolev_norm(diff, NormSpec(0.0)))
        hmn.append(bolab.sobolev_norm(diff, NormSpec(-0.25)))
        res = bolab.fit(total, merged.lambdas, NormSpec(0.0), start=merged.centers)
        fitted.append(res.distance)
    decreasing = l2n[0] > l2n[1] > l2n[2] and hmn[0] > hmn[1] > hmn[2]
    criterion(
        10, "molecular decomposition",
        decreasing and fitted[-1] < 0.05,
        f"L2 {[round(v, 3) for v in l2n]} and H^-1/4 {[round(v, 3) for v in hmn]} "
        f"decreasing; manifold distance at X=40: {fitted[-1]:.3e} < 0.05",
    )


def test_c11_representation_equality(grid):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n in range(1, 6):
        for _ in range(10):
            lam = np.sort(rng.uniform(-2.0, -0.1, n))
            if n > 1 and np.any(np.diff(lam) < 5e-2):
                continue
            cfg = SolitonConfig(lam, rng.uniform(-40, 40, n))
            a, b = bolab.representation_check(cfg, float(rng.uniform(-60, 60)))
            worst = max(worst, abs(a - b))
    criterion(
        11, "representation equality",
        worst < 1e-10,
        f"max |trace - double sum| = {worst:.2e} over N <= 5, tol 1e-10",
    )


@pytest.mark.parametrize("delta", [0.005, 0.01])
def test_c12_stability_probe(grid, delta):
    spec_h = NormSpec(0.5, 1.0)
    noise = band_limited_noise(grid, 8.0, seed=11, spec=spec_h, delta=delta)
    u0 = bolab.single_soliton(-0.5, 0.0, grid) + noise
    traj = bolab.evolve(u0, FlowConfig(dt=1e-3, t_end=20.0, monitor_stride=100,
                                       monitor_beta=False))
    lam = [-0.5]
    dists = []
    for t, snap in zip(traj.times, traj.snapshots):
        res = bolab.fit(snap, lam, start=np.array([float(t)]))
        dists.append(res.distance)
    dists = np.asarray(dists)
    sup = float(dists.max())
    tail = dists[-dists.size // 4:]
    rising = bool(np.all(np.diff(tail) > 0))
    criterion(
        12, f"orbital stability probe (delta={delta})",
        sup <= 10 * delta and not rising,
        f"sup distance {sup:.3e} <= 10 delta = {10 * delta:.3e}; "
        f"terminal trend {'rising' if rising else 'flat'}",
    )


def test_c13_manifold_fitting(grid):
    rng = np.random.default_rng(99)
    worst_c, worst_d = 0.0, 0.0
    for _ in range(3):
        n = int(rng.integers(1, 4))
        lam = np.sort(rng.uniform(-1.5, -0.3, n))
        while np.any(np.diff(lam) < 0.15):
            lam = np.sort(rng.uniform(-1.5, -0.3, n))
        centers = np.sort(rng.uniform(-30, 30, n))
        while n > 1 and np.any(np.diff(centers) < 5.0):
            centers = np.sort(rng.uniform(-30, 30, n))
        cfg = SolitonConfig(lam, centers)
        res = bolab.fit(bolab.profile(cfg, grid), lam)
        worst_c = max(worst_c, float(np.max(np.abs(res.centers - centers))))
        worst_d = max(worst_d, res.distance)
    criterion(
        13, "manifold fitting",
        worst_c < 1e-4 and worst_d < 1e-8,
        f"max center error {worst_c:.2e} (tol 1e-4), "
        f"max distance {worst_d:.2e} (tol 1e-8) over 3 random configs",
    )
