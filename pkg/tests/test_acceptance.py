"""Acceptance criteria 1-11 at their stated tolerances.

Each test records a one-line verdict in RESULTS; conftest.py prints them at the end of the run.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import integrate

from groundfield.errors import QuadratureDivergence
from groundfield.fields import RadialPowerField, power_potential
from groundfield.grids import Grid
from groundfield.harmonics import coulomb_rate, coulomb_states, oscillator_states, schrodinger_residual
from groundfield.oracle import default_tolerance, discretize, radial_ground_energy, smallest_eigenpair
from groundfield.states import gaussian_state, random_gaussian_trial, solve_ground_state, state_integrals
from groundfield.verify import (check_bump_counterexample, check_equality_peq4, check_hardy,
                                check_hardy_family, check_hersch_tight, check_inequality_peq2,
                                check_peq1_trials, check_scaling, check_virial, hardy_constant)

RESULTS = {}


def record(number, ok, detail):
    RESULTS[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[number]


def _points(rng, n, count, r_lo=None, r_hi=None):
    if r_lo is None:
        return 1.5 * rng.normal(size=(count, n))
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * rng.uniform(r_lo, r_hi, size=(count, 1))


def test_criterion_01_oscillator_eigenvalue():
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3):
        for alpha in (0.5, 1.0, 2.0):
            res = radial_ground_energy(lambda r, a=alpha: a * a * r * r, n, 1e-8)
            worst = max(worst, abs(res.E - alpha * n))
    E_grid, _ = smallest_eigenpair(discretize(power_potential(1.0, 2.0, 2), Grid(2, 8.0, 200)))
    grid_rel = abs(E_grid - 2.0) / 2.0
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-6 and grid_rel <= 1e-2 and elapsed <= 60,
           f"max radial |dE| = {worst:.2e}, 2D grid rel = {grid_rel:.2e}, {elapsed:.1f} s")


def test_criterion_02_coulomb_eigenvalue():
    start = time.perf_counter()
    worst = 0.0
    for Z in (1.0, 2.0):
        profile = lambda r, z=Z: -z / r  # noqa: E731
        res = radial_ground_energy(profile, 3, default_tolerance(profile))
        worst = max(worst, abs(res.E + Z * Z / 4))
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-4 and elapsed <= 60, f"max |dE| = {worst:.2e}, {elapsed:.1f} s")


def test_criterion_03_spectrum_ladders():
    rng = np.random.default_rng(3)
    n, alpha = 3, 1.0
    worst, count = 0.0, 0
    for k in range(4):
        x = _points(rng, n, 500)
        V = lambda x: alpha ** 2 * np.sum(x * x, axis=-1)  # noqa: E731
        for psi in oscillator_states(n, alpha, k):
            worst = max(worst, float(np.max(schrodinger_residual(psi, V, alpha * (n + 2 * k), x)[0])))
            count += 1
        g = coulomb_rate(n, alpha, k)
        assert -g * g == pytest.approx(-(2 / (n - 1 + 2 * k)) ** 2 * alpha ** 2, rel=1e-15)
        x = _points(rng, n, 500, 0.1, 20.0)
        V = lambda x: -alpha * (n - 1) / np.linalg.norm(x, axis=-1)  # noqa: E731
        for psi in coulomb_states(n, alpha, k):
            worst = max(worst, float(np.max(schrodinger_residual(psi, V, -g * g, x)[0])))
            count += 1
    record(3, worst <= 1e-8 and count == 2 * 16, f"{count} states, max pointwise residual = {worst:.2e}")


def test_criterion_04_identity():
    reports = check_peq1_trials(25, 42)
    worst = max(r.rel_error for r in reports)
    record(4, len(reports) == 25 and worst <= 1e-6, f"25 trials, max rel error = {worst:.2e}")


def test_criterion_05_equality_chain():
    worst = 0.0
    for p in (0.0, 0.5, 1.0):
        d = check_equality_peq4(RadialPowerField(1.0, p, 3)).details
        q = [d["gradNormSq"], d["fieldNormSq"], d["halfDivIntegral"]]
        worst = max(worst, max(abs(a - b) / max(abs(a), abs(b)) for a in q for b in q))
    # independent oracle: ||grad phi0||^2 = 4 pi int r^4 pi^(-3/2) e^(-r^2) dr for the oscillator
    quad, _ = integrate.quad(lambda r: 4 * math.pi * r ** 4 * math.pi ** -1.5 * math.exp(-r * r), 0, np.inf,
                             epsabs=1e-14, epsrel=1e-13)
    osc = check_equality_peq4(RadialPowerField(1.0, 0.0, 3)).details["gradNormSq"]
    ok = worst <= 1e-6 and abs(quad - 1.5) <= 1e-10 and abs(osc - quad) / quad <= 1e-6
    record(5, ok, f"max pairwise rel = {worst:.2e}, oscillator {osc:.12f} vs oracle {quad:.12f}")


def test_criterion_06_heisenberg_hardy():
    heis = check_inequality_peq2(gaussian_state(3, 0.5), RadialPowerField(1.0, 0.0, 3))
    heis_ok = heis.rel_error <= 1e-6 and heis.rhs == pytest.approx(9 / 4, rel=1e-12)
    rng = np.random.default_rng(6)
    ratios = []
    for n in (3, 4):
        for _ in range(5):
            rep = check_hardy(random_gaussian_trial(rng, n), n)
            ratios.append(rep.lhs / rep.rhs)
    hardy_ok = min(ratios) >= 1.0
    family = [check_hardy_family(n, 1e-3).details["ratioOverConstant"] for n in (3, 4)]
    family_ok = all(1.0 <= f <= 1.1 for f in family)
    divergent = []
    for n in (3, 4):
        phi0 = solve_ground_state(RadialPowerField((n - 2) / 2, 2.0, n))
        try:
            state_integrals(phi0, [lambda d: np.sum(d.grad ** 2, axis=-1)], origin_power=-n)
            divergent.append(False)
        except QuadratureDivergence:
            divergent.append(True)
    assert hardy_constant(4) == 1.0
    record(6, heis_ok and hardy_ok and family_ok and all(divergent),
           f"Heisenberg rel = {heis.rel_error:.1e}, min Hardy ratio/C = {min(ratios):.3f}, "
           f"family ratio/C = {max(family):.4f}, divergence raised = {all(divergent)}")


def test_criterion_07_hersch_tightness():
    gaps = []
    ok = True
    for V, X in ((power_potential(1.0, 2.0, 3), RadialPowerField(1.0, 0.0, 3)),
                 (power_potential(-2.0, -1.0, 3), RadialPowerField(1.0, 1.0, 3))):
        otol = default_tolerance(V.radial_profile())
        rep = check_hersch_tight(V, X, rng=np.random.default_rng(7), oracle_tol=otol)
        gap = abs(rep.lhs - rep.rhs)
        gaps.append(gap)
        ok = ok and gap <= max(1e-8, otol)
    record(7, ok, "oracle E0 minus sampled inf: " + ", ".join(f"{g:.1e}" for g in gaps))


def test_criterion_08_scaling():
    rng = np.random.default_rng(8)
    worst = 0.0
    for p in (0.0, 1.0, 2.0):
        X = RadialPowerField(1.0, p, 3)
        phi = random_gaussian_trial(rng, 3)
        for lam in (0.5, 2.0, 5.0):
            rep = check_scaling(phi, X, lam)
            worst = max(worst, rep.rel_error)
    record(8, worst <= 1e-8, f"max rel error = {worst:.2e}")


def test_criterion_09_virial():
    osc = check_virial(solve_ground_state(RadialPowerField(1.0, 0.0, 3)), power_potential(1.0, 2.0, 3), 2.0)
    hyd = check_virial(solve_ground_state(RadialPowerField(1.0, 1.0, 3)), power_potential(-2.0, -1.0, 3), -1.0)
    record(9, osc.rel_error <= 1e-8 and hyd.rel_error <= 1e-8,
           f"oscillator rel = {osc.rel_error:.1e}, hydrogen rel = {hyd.rel_error:.1e}")


def test_criterion_10_bump():
    rep = check_bump_counterexample(jmin=3, jmax=20)
    mags = rep.details["magnitudes"]
    increasing = len(mags) == 18 and all(b > a for a, b in zip(mags, mags[1:]))
    record(10, increasing, f"|X| from {mags[0]:.3g} to {mags[-1]:.3g} over j = 3..20")


def test_criterion_11_determinism():
    cmd = [sys.executable, "-m", "groundfield", "verify", "--suite", "all", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    lines = a.stdout.count(b"\n")
    record(11, a.returncode == b.returncode == 0 and a.stdout == b.stdout and lines > 0,
           f"{lines} records, exit {a.returncode}/{b.returncode}, identical = {a.stdout == b.stdout}")

