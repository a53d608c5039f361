"""Acceptance criteria, one test each.

Each test appends a PASS/FAIL line to ``ACCEPTANCE_LINES``; conftest prints
them at the end of the session.  Tolerances are the stated ones.
"""

import numpy as np
import pytest

from sastirap.experiments import (RobustnessSweep, ScenarioSpec, run_scenario,
                                  shifted_correction_trajectory)
from sastirap.hamiltonian import (IDX_M1, eigenframe, h_stirap,
                                  stirap_plus_exact_cd_trajectory,
                                  stirap_trajectory, total_trajectory)
from sastirap.propagator import Method, PropagationConfig, basis_state, propagate
from sastirap.pulses import PulseParams, omega_d, sample_correction

from conftest import ACCEPTANCE_LINES, MHZ, REFERENCE_SETS, gaussian

G, G_CORR = REFERENCE_SETS["gaussian"]

# first converged simulation at T = 1.25 us (magnus4, 20000 steps)
FROZEN_GAP_1_25 = 0.8657498772058589 - 0.21318594804603452


def report(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def trace(T, protocol, initial="auto"):
    corr = None if protocol != "sa" else G_CORR
    return run_scenario(ScenarioSpec("trace", gaussian(T), corr, protocol,
                                     initial_state=initial))


def test_criterion_01_correction_amplitude():
    c = sample_correction(G, G_CORR, G.T / 2)
    a, b = abs(c.omega_a) / MHZ, abs(c.omega_b) / MHZ
    ok = abs(a / 2.6221 - 1) <= 1e-3 and abs(b / 2.6221 - 1) <= 1e-3
    report(1, ok, f"peak |Omega_a|/2pi = {a:.7f}, |Omega_b|/2pi = {b:.7f} MHz "
                  f"(target 2.6221, rel 1e-3)")


def test_criterion_02_constant_two_photon_pulse():
    p, _ = REFERENCE_SETS["trigonometric"]
    t = np.linspace(0, p.T, 1000)
    err = np.max(np.abs(np.abs(omega_d(p, t)) / (np.pi / p.T) - 1))
    report(2, err <= 1e-12, f"max rel deviation of |Omega_d| from pi/T: {err:.2e}")


def test_criterion_03_closed_forms():
    worst = 0.0
    for T in (1.25, 2.0, 5.5):
        p = gaussian(T)
        t = np.linspace(0, p.T, 1000)
        k = 4 * p.delta_t / p.sigma ** 2
        closed = k / np.cosh(k * (t - p.T / 2))
        worst = max(worst, np.max(np.abs(np.abs(omega_d(p, t)) / closed - 1)))
    p, _ = REFERENCE_SETS["exponential"]
    t = np.linspace(0, p.T, 1000)
    k = 1 / (2 * p.sigma)
    closed = k / np.cosh(k * (t - p.T / 2))
    worst = max(worst, np.max(np.abs(np.abs(omega_d(p, t)) / closed - 1)))
    report(3, worst <= 1e-10, f"max rel deviation, closed vs direct: {worst:.2e}")


def test_criterion_04_dark_state_and_eigenvalues():
    worst_null, worst_eig = 0.0, 0.0
    for p, _ in REFERENCE_SETS.values():
        t = np.linspace(0, p.T, 1000)
        h = h_stirap(p, t)
        fr = eigenframe(p, t)
        resid = np.linalg.norm(np.einsum("nij,nj->ni", h, fr.dark), axis=-1)
        scale = np.linalg.norm(h, ord=2, axis=(-2, -1))
        worst_null = max(worst_null, np.max(resid / scale))
        worst_eig = max(worst_eig, np.max(np.abs(
            np.sort(fr.eigenvalues, axis=-1) - np.linalg.eigvalsh(h))))
    ok = worst_null <= 1e-12 and worst_eig <= 1e-12
    report(4, ok, f"max |H D|/|H| = {worst_null:.2e}, "
                  f"max eigenvalue error = {worst_eig:.2e}")


def test_criterion_05_exact_counterdiabatic():
    # exactness is a property of the followed eigenstate: start in D(0)
    effs = {T: trace(T, "exact-cd", "dark").efficiency for T in (0.5, 1.25, 2.0)}
    # |-1> differs from D(0) by theta(0) ~ 7.5e-4; reported, not judged
    basis = {T: trace(T, "exact-cd", "minus1").efficiency for T in effs}
    ACCEPTANCE_LINES.append(
        "   info 5: from |-1>, 1 - eff = "
        + ", ".join(f"{1 - e:.1e} (T={T})" for T, e in basis.items()))
    worst = min(effs.values())
    report(5, worst >= 1 - 1e-6,
           "from D(0), 1 - eff = "
           + ", ".join(f"{1 - e:.1e} (T={T})" for T, e in effs.items()))


def test_criterion_06_protocol_dominance(gaussian_sweep):
    st, sa = gaussian_sweep.efficiency("stirap"), gaussian_sweep.efficiency("sa")
    margin = np.min(sa - st)
    gap = trace(1.25, "sa").efficiency - trace(1.25, "stirap").efficiency
    ok = margin >= -0.02 and gap >= 0.2 and abs(gap - FROZEN_GAP_1_25) <= 1e-9
    report(6, ok, f"min(sa - stirap) over 24 T = {margin:+.4f}; gap at 1.25 us "
                  f"= {gap:.6f} (frozen {FROZEN_GAP_1_25:.6f})")


def test_criterion_07_adiabatic_limit():
    eff = trace(20.0, "stirap").efficiency
    report(7, eff >= 0.99, f"stirap efficiency at T = 20 us: {eff:.6f}")


def test_criterion_08_intermediate_suppression():
    rows, ok = [], True
    for T in (1.25, 2.0):
        st = trace(T, "stirap").meta["max_intermediate"]
        sa = trace(T, "sa").meta["max_intermediate"]
        ok &= sa <= st
        rows.append(f"T={T}: sa {sa:.4f} vs stirap {st:.4f}")
    report(8, ok, "max P0 " + "; ".join(rows))


def test_criterion_09_robustness_area(robustness_grid):
    st = int(np.sum(robustness_grid.efficiency("stirap") >= 0.9))
    sa = int(np.sum(robustness_grid.efficiency("sa") >= 0.9))
    report(9, sa > st, f"cells >= 0.9 on 9x9 grid: sa {sa}, stirap {st}")


def _scenario_trajectories():
    """Every (trajectory, initial state) propagated by criteria 5 to 9."""
    out = []
    for T in (0.5, 1.25, 2.0):
        p = gaussian(T)
        traj = stirap_plus_exact_cd_trajectory(p)
        out.append((traj, eigenframe(p, 0.0).dark))
        out.append((traj, basis_state(IDX_M1)))
    minus1 = basis_state(IDX_M1)
    Ts = list(np.linspace(0.5, 6.0, 24)) + [1.25, 2.0]
    for T in Ts:
        p = PulseParams("gaussian", G.omega0, T, sigma=T / 6, delta_t=T / 10)
        out.append((stirap_trajectory(p), minus1))
        out.append((total_trajectory(p, G_CORR), minus1))
    out.append((stirap_trajectory(gaussian(20.0)), minus1))
    sw = RobustnessSweep()
    center = sw.center_pulse(G.omega0)
    for s in sw.sigma_values:
        for r in sw.delta_t_ratios:
            p = PulseParams("gaussian", G.omega0, 6 * s + 2 * r * s, sigma=s,
                            delta_t=r * s)
            out.append((stirap_trajectory(p), minus1))
            out.append((shifted_correction_trajectory(p, center, G_CORR), minus1))
    return out


def test_criterion_10_integrator_health():
    base_cfg = PropagationConfig()
    fine_cfg = PropagationConfig(2 * base_cfg.step_count,
                                 record_stride=2 * base_cfg.record_stride)
    rk4_cfg = PropagationConfig(method=Method.RK4)
    drift = doubling = cross = 0.0
    jobs = _scenario_trajectories()
    for traj, psi in jobs:
        base = propagate(traj, psi, base_cfg)
        fine = propagate(traj, psi, fine_cfg)
        rk4 = propagate(traj, psi, rk4_cfg)
        drift = max(drift, np.max(np.abs(base.populations.sum(axis=1) - 1)))
        doubling = max(doubling, abs(base.efficiency - fine.efficiency))
        cross = max(cross, abs(base.efficiency - rk4.efficiency))
    ok = drift < 1e-9 and doubling < 1e-8 and cross < 1e-6
    report(10, ok, f"{len(jobs)} propagations: norm drift {drift:.1e}, "
                   f"step doubling {doubling:.1e}, magnus4 vs rk4 {cross:.1e}")
