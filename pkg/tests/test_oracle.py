import math

import numpy as np
import pytest

from groundfield.errors import InvalidInput, NodeSingularity, NoConvergence
from groundfield.fields import PotentialFunction, RadialPowerField, power_potential, schrodinger_potential, \
    zero_field
from groundfield.grids import Grid, GridState
from groundfield.oracle import (RadialProblem, default_tolerance, discretize, lambda_estimate,
                                radial_ground_energy, radial_solve, rayleigh, smallest_eigenpair)
from groundfield.states import gaussian_state, random_gaussian_trial, solve_ground_state


def _zero(n):
    return PotentialFunction(lambda x: np.zeros(np.asarray(x).shape[:-1]), 0.0, "0", n,
                             lambda r: np.zeros_like(np.asarray(r, dtype=float)))


def _discrete_box_eigenvalue(m, L):
    """Smallest eigenvalue of the 3-point Dirichlet Laplacian, in closed form."""
    h = 2 * L / (m + 1)
    return 4 / h ** 2 * math.sin(math.pi / (2 * (m + 1))) ** 2


# -- grid operator -------------------------------------------------------------------------------

def test_box_laplacian_one_dimension():
    L = math.pi / 2
    E, psi = smallest_eigenpair(discretize(_zero(1), Grid(1, L, 400)))
    assert E == pytest.approx(_discrete_box_eigenvalue(400, L), rel=1e-10)
    assert E == pytest.approx((math.pi / (2 * L)) ** 2, rel=1e-4)


def test_box_unit_half_width():
    E, _ = smallest_eigenpair(discretize(_zero(1), Grid(1, 1.0, 999)))
    assert E == pytest.approx(math.pi ** 2 / 4, abs=1e-4)


def test_box_two_dimensions_is_sum():
    E, psi = smallest_eigenpair(discretize(_zero(2), Grid(2, 1.0, 60)))
    assert E == pytest.approx(2 * _discrete_box_eigenvalue(60, 1.0), rel=1e-9)
    assert np.all(psi.values > 0)
    assert psi.norm_sq() == pytest.approx(1.0, rel=1e-12)


def test_shifted_oscillator_on_grid_is_near_zero():
    V = schrodinger_potential(RadialPowerField(1.0, 0.0, 3))
    Es = [smallest_eigenpair(discretize(V, Grid(3, 6.0, m)))[0] for m in (23, 47)]
    # second-order: halving h cuts the error by about four
    assert abs(Es[1]) < abs(Es[0]) / 3
    assert abs(Es[1]) < 0.02


def test_coulomb_on_a_node_is_singular():
    V = power_potential(-2.0, -1.0, 3)
    with pytest.raises(NodeSingularity):
        discretize(V, Grid(3, 4.0, 9))
    discretize(V, Grid(3, 4.0, 10))


def test_grid_oscillator_two_dimensions():
    E, psi = smallest_eigenpair(discretize(power_potential(1.0, 2.0, 2), Grid(2, 8.0, 200)))
    assert E == pytest.approx(2.0, rel=1e-2)
    assert np.all(psi.values > 0)


@pytest.mark.parametrize("n,m", [(1, 200), (2, 40)])
def test_grid_convergence_order(n, m):
    V = power_potential(1.0, 2.0, n)
    errs = [abs(smallest_eigenpair(discretize(V, Grid(n, 6.0, mm)))[0] - n) for mm in (m - 1, 2 * m - 1)]
    # m -> 2m - 1 halves h exactly when L is fixed: h = 2L/(m+1)
    assert errs[0] / errs[1] >= 3


def test_smallest_eigenpair_iteration_cap():
    with pytest.raises(NoConvergence):
        smallest_eigenpair(discretize(power_potential(1.0, 2.0, 3), Grid(3, 6.0, 30)), maxiter=2)
    # an unreachable residual tolerance is reported, not silently accepted
    with pytest.raises(NoConvergence):
        smallest_eigenpair(discretize(power_potential(1.0, 2.0, 2), Grid(2, 6.0, 30)), tol=1e-20)


def test_grid_state_positive_and_close_to_gaussian():
    grid = Grid(2, 7.0, 100)
    E, psi = smallest_eigenpair(discretize(power_potential(1.0, 2.0, 2), grid))
    phi0 = solve_ground_state(RadialPowerField(1.0, 0.0, 2))
    exact = phi0(grid.points())
    assert np.max(np.abs(psi.values - exact)) < 5e-3
    assert np.all(psi.values > 0)


# -- radial solver -------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_radial_oscillator(n, alpha):
    X = RadialPowerField(alpha, 0.0, n)
    res = radial_ground_energy(lambda r: alpha ** 2 * r ** 2, n, 1e-8, solve_ground_state(X))
    assert abs(res.E - alpha * n) <= max(1e-6, res.error)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_radial_coulomb(n, alpha):
    X = RadialPowerField(alpha, 1.0, n)
    res = radial_ground_energy(lambda r: -alpha * (n - 1) / r, n, 1e-6, solve_ground_state(X))
    assert abs(res.E + alpha ** 2) <= max(1e-6, res.error)


def test_radial_hydrogen_z1():
    res = radial_ground_energy(lambda r: -1.0 / r, 3, 1e-6)
    assert res.E == pytest.approx(-0.25, abs=1e-4)
    assert res.R > 10


def test_radial_unit_ball():
    res = radial_solve(RadialProblem(lambda r: 0.0 * r, 3, 1.0, 1000), 1e-8)
    assert res.E == pytest.approx(math.pi ** 2, abs=1e-4)
    assert abs(res.E - math.pi ** 2) <= 1e-6


def test_radial_one_dimension_box():
    # in n = 1 the radial problem is the even sector of (-1, 1): (pi/2)^2
    res = radial_solve(RadialProblem(lambda r: 0.0 * r, 1, 1.0, 1000), 1e-8)
    assert res.E == pytest.approx(math.pi ** 2 / 4, abs=1e-6)


def test_radial_solver_validation():
    with pytest.raises(InvalidInput):
        RadialProblem(lambda r: r, 3, -1.0)
    with pytest.raises(NoConvergence):
        radial_solve(RadialProblem(lambda r: -1.0 / r, 3, 40.0, 100), 1e-12, max_m=800)


def test_effective_potential():
    prob = RadialProblem(lambda r: r ** 2, 3, 5.0)
    assert prob.effective_potential(2.0) == pytest.approx(4.0)
    prob = RadialProblem(lambda r: r ** 2, 4, 5.0)
    assert prob.effective_potential(1.0) == pytest.approx(1.0 + 3 / 4)


def test_default_tolerance():
    assert default_tolerance(lambda r: r ** 2) == 1e-8
    assert default_tolerance(lambda r: -1.0 / r) == 1e-6
    assert default_tolerance(None) == 1e-8


# -- Rayleigh quotient and Lambda ------------------------------------------------------------------

def test_rayleigh_examples():
    osc = solve_ground_state(RadialPowerField(1.0, 0.0, 3))
    assert rayleigh(osc, power_potential(1.0, 2.0, 3)).value == pytest.approx(3.0, rel=1e-10)
    hyd = solve_ground_state(RadialPowerField(1.0, 1.0, 3))
    assert rayleigh(hyd, power_potential(-2.0, -1.0, 3)).value == pytest.approx(-1.0, rel=1e-10)


def test_rayleigh_on_grid_state():
    grid = Grid(2, 8.0, 120)
    V = power_potential(1.0, 2.0, 2)
    E, psi = smallest_eigenpair(discretize(V, grid))
    est = rayleigh(psi, V)
    assert abs(est.value - 2.0) <= est.error


def test_variational_principle():
    V = power_potential(1.0, 2.0, 3)
    E0 = rayleigh(solve_ground_state(RadialPowerField(1.0, 0.0, 3)), V).value
    rng = np.random.default_rng(3)
    for _ in range(20):
        assert rayleigh(random_gaussian_trial(rng, 3), V).value >= E0 - 1e-9


def test_rayleigh_above_oracle_for_coulomb():
    V = power_potential(-2.0, -1.0, 3)
    E0 = radial_ground_energy(V.radial_profile(), 3, 1e-6,
                              solve_ground_state(RadialPowerField(1.0, 1.0, 3))).E
    rng = np.random.default_rng(4)
    for _ in range(20):
        assert rayleigh(random_gaussian_trial(rng, 3), V).value >= E0 - 1e-6


def test_lambda_estimate_examples():
    assert abs(lambda_estimate(RadialPowerField(1.0, 0.0, 3))) <= 1e-5
    assert abs(lambda_estimate(RadialPowerField(1.0, 1.0, 3))) <= 1e-4
    assert abs(lambda_estimate(zero_field(3))) <= 1e-6


def test_lambda_estimate_inverse_square_field():
    # X = x/(4|x|^2): V = -3/(16 |x|^2) lies above the Hardy threshold -1/(4|x|^2), so
    # Lambda = 0 without a normalizable ground state; the oracle approaches 0 from above
    for tol in (1e-3, 1e-4, 1e-5):
        value = lambda_estimate(RadialPowerField(0.25, 2.0, 3), tol)
        assert 0 <= value <= 2 * tol
