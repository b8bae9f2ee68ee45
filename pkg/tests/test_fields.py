import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groundfield.errors import InvalidInput, InvalidScale, NotAdmissible, NotGradient, SingularPoint
from groundfield.fields import (ComponentField, GradientField, RadialPowerField, admissibility, as_radial_power,
                                eval_field, field_div, field_from_spec, field_norm_sq, field_to_spec,
                                potential_from_expr, power_potential, scale_field, schrodinger_potential)

alphas = st.floats(0.1, 5.0)
powers = st.sampled_from([0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
dims = st.integers(1, 4)


def _regular_points(rng, n, count):
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * rng.uniform(0.2, 5.0, size=(count, 1))


# -- examples -----------------------------------------------------------------------------

def test_eval_field_examples():
    np.testing.assert_array_equal(eval_field(RadialPowerField(1, 0, 3), [1.0, 2.0, 3.0]), [1, 2, 3])
    np.testing.assert_allclose(eval_field(RadialPowerField(2, 1, 3), [3.0, 0.0, 4.0]), [6 / 5, 0, 8 / 5],
                               rtol=1e-15)
    with pytest.raises(SingularPoint):
        eval_field(RadialPowerField(1, 2, 3), [0.0, 0.0, 0.0])


def test_field_div_examples():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(20, 3))
    np.testing.assert_allclose(field_div(RadialPowerField(1, 0, 3), x), 3.0)
    assert field_div(RadialPowerField(1, 1, 3), [0.0, 2.0, 0.0]) == pytest.approx(1.0, rel=1e-15)
    np.testing.assert_allclose(field_div(RadialPowerField(1, 3, 3), x), 0.0, atol=0)
    # p = 0 is smooth through the origin
    assert field_div(RadialPowerField(1, 0, 3), [0.0, 0.0, 0.0]) == 3.0
    with pytest.raises(SingularPoint):
        field_div(RadialPowerField(1, 0.5, 3), [0.0, 0.0, 0.0])


def test_field_norm_sq_examples():
    assert field_norm_sq(RadialPowerField(2, 0, 3), [1.0, 1.0, 1.0]) == pytest.approx(12.0, rel=1e-15)
    x = np.random.default_rng(1).normal(size=(10, 3))
    np.testing.assert_allclose(field_norm_sq(RadialPowerField(1, 1, 3), x), 1.0, rtol=1e-15)
    assert field_norm_sq(RadialPowerField(3, 2, 4), [0.0, 3.0, 0.0, 0.0]) == pytest.approx(1.0, rel=1e-15)


def test_schrodinger_potential_examples():
    x = np.random.default_rng(2).normal(size=(10, 3))
    r = np.linalg.norm(x, axis=1)
    V = schrodinger_potential(RadialPowerField(1, 0, 3), 0.0)
    np.testing.assert_allclose(V(x), r ** 2 - 3, rtol=1e-13, atol=1e-13)
    V = schrodinger_potential(RadialPowerField(1, 1, 3), 0.0)
    np.testing.assert_allclose(V(x), 1 - 2 / r, rtol=1e-14)
    for a in (0.5, 1.0, 2.5):
        V = schrodinger_potential(RadialPowerField(a, 2, 3), 0.0)
        np.testing.assert_allclose(V(x), a * (a - 3 + 2) / r ** 2, rtol=1e-13)
    V = schrodinger_potential(RadialPowerField(1, 0, 3), 2.5)
    np.testing.assert_allclose(V(x), r ** 2 - 0.5, rtol=1e-13, atol=1e-13)


def test_schrodinger_potential_rejects_inadmissible():
    with pytest.raises(NotAdmissible):
        schrodinger_potential(RadialPowerField(1, 2.5, 3))


def test_radial_profile_matches_pointwise_potential():
    X = RadialPowerField(1.3, 0.5, 3)
    V = schrodinger_potential(X, 0.7)
    r = np.array([0.3, 1.0, 4.0])
    pts = r[:, None] * np.array([0.0, 1.0, 0.0])
    np.testing.assert_allclose(V.radial_profile()(r), V(pts), rtol=1e-14)


def test_admissibility_examples():
    both = {"normSqLocIntegrable": True, "divLocIntegrable": True}
    assert admissibility(RadialPowerField(1, 1, 3)).as_dict() == both
    assert admissibility(RadialPowerField(1, 2.5, 3)).as_dict() == {"normSqLocIntegrable": False,
                                                                    "divLocIntegrable": True}
    assert admissibility(RadialPowerField(1, 0, 1)).ok
    # the div threshold p < 1 + n is strict as well
    assert not admissibility(RadialPowerField(1, 4.0, 3)).div_loc_integrable
    assert GradientField.from_text("x1^2", 2).admissibility().as_dict() == {"normSqLocIntegrable": None,
                                                                          "divLocIntegrable": None}


def test_scale_field_examples():
    assert scale_field(RadialPowerField(1, 0, 3), 2) == RadialPowerField(0.25, 0, 3)
    assert scale_field(RadialPowerField(5, 2, 3), 7) == RadialPowerField(5, 2, 3)
    X = GradientField.from_text("x1^2 + x2", 2)
    assert scale_field(X, 1) is X
    for lam in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidScale):
            scale_field(RadialPowerField(1, 0, 3), lam)


def test_gradient_field_scaling_is_pointwise():
    X = GradientField.from_text("x1^2 + exp(-r^2)*x2", 2)
    lam = 1.7
    x = np.random.default_rng(3).normal(size=(8, 2))
    np.testing.assert_allclose(scale_field(X, lam)(x), X(x / lam) / lam, rtol=1e-13)


def test_gradient_field_matches_radial_power():
    X = GradientField.from_text("0.5*r^2", 3)
    Y = RadialPowerField(1, 0, 3)
    x = np.random.default_rng(4).normal(size=(10, 3))
    np.testing.assert_allclose(X(x), Y(x), rtol=1e-15)
    np.testing.assert_allclose(X.div(x), Y.div(x), rtol=1e-15)
    assert as_radial_power(X) == Y
    assert as_radial_power(GradientField.from_text("2*r", 3)) == RadialPowerField(2.0, 1.0, 3)
    assert as_radial_power(GradientField.from_text("x1^2", 3)) is None


def test_component_field_curl_and_divergence():
    X = ComponentField.from_text(["x2", "-x1"], 2)
    x = np.array([[1.0, 2.0], [0.5, -0.3]])
    np.testing.assert_allclose(X(x), np.stack([x[:, 1], -x[:, 0]], axis=-1))
    np.testing.assert_allclose(X.div(x), 0.0)
    assert X.admissibility().ok


def test_field_specs_round_trip():
    for X in (RadialPowerField(1.5, 1.0, 3), GradientField.from_text("0.5*r^2 + x1", 3)):
        Y = field_from_spec(field_to_spec(X))
        x = np.random.default_rng(5).normal(size=(4, 3))
        np.testing.assert_array_equal(X(x), Y(x))
    with pytest.raises(InvalidInput):
        field_from_spec({"kind": "radial-power", "alpha": 1.0})
    with pytest.raises(InvalidInput):
        field_from_spec({"kind": "spiral", "n": 2})


def test_potential_helpers():
    V = potential_from_expr("-1/r", 3)
    assert V.radial is not None
    assert V([0.0, 0.0, 2.0]) == -0.5
    W = power_potential(2.0, 2.0, 3)
    assert W([1.0, 1.0, 0.0]) == pytest.approx(4.0)
    with pytest.raises(SingularPoint):
        power_potential(-1.0, -1.0, 3)(np.zeros(3))


def test_not_gradient_is_an_input_error():
    assert issubclass(NotGradient, InvalidInput)


# -- properties ----------------------------------------------------------------------------

@pytest.mark.parametrize("alpha,p,n", [(a, p, n) for a in (0.5, 2.0) for p in (0.0, 0.5, 1.0, 1.7, 2.0, 3.0)
                                       for n in (1, 2, 3, 4)])
def test_divergence_against_central_differences(alpha, p, n):
    X = RadialPowerField(alpha, p, n)
    x = _regular_points(np.random.default_rng(int(10 * p) + n), n, 1000)
    h = 1e-5
    # fourth-order central difference; the plain two-point rule is truncation-limited near r = 0.2
    fd = sum((8 * (X(x + h * e)[:, i] - X(x - h * e)[:, i]) - (X(x + 2 * h * e)[:, i] - X(x - 2 * h * e)[:, i]))
             / (12 * h) for i, e in enumerate(np.eye(n)))
    div = field_div(X, x)
    assert np.all(np.abs(div - fd) <= 1e-6 * (1 + np.abs(div)))


@settings(max_examples=60, deadline=None)
@given(alphas, powers, dims, st.integers(0, 2 ** 31))
def test_norm_sq_is_sum_of_squares(alpha, p, n, seed):
    X = RadialPowerField(alpha, p, n)
    x = _regular_points(np.random.default_rng(seed), n, 50)
    v = eval_field(X, x)
    np.testing.assert_allclose(field_norm_sq(X, x), np.sum(v * v, axis=-1), rtol=1e-14)


@settings(max_examples=100, deadline=None)
@given(alphas, powers, dims, st.floats(0.05, 20.0))
def test_scale_inverse_recovers_parameters(alpha, p, n, lam):
    X = RadialPowerField(alpha, p, n)
    Y = scale_field(scale_field(X, lam), 1 / lam)
    assert Y.p == X.p and Y.n == X.n
    # alpha * lam^(p-2) * lam^(2-p) is exact up to the rounding of the two powers
    assert Y.alpha == pytest.approx(X.alpha, rel=8 * np.finfo(float).eps)


@settings(max_examples=40, deadline=None)
@given(alphas, powers, st.integers(2, 4), st.integers(0, 2 ** 31))
def test_radial_fields_have_no_angular_part(alpha, p, n, seed):
    X = RadialPowerField(alpha, p, n)
    x = _regular_points(np.random.default_rng(seed), n, 30)
    v = X(x)
    wedge = x[:, :, None] * v[:, None, :] - x[:, None, :] * v[:, :, None]
    assert np.max(np.abs(wedge)) <= 1e-13 * np.max(np.abs(x[:, :, None] * v[:, None, :]))


@settings(max_examples=40, deadline=None)
@given(alphas, st.sampled_from([0.0, 0.5, 1.0, 1.5]), st.integers(2, 4), st.floats(0.1, 10.0),
       st.integers(0, 2 ** 31))
def test_scaled_field_is_field_at_x_over_lam(alpha, p, n, lam, seed):
    # phi_lam(x) = lam^(n/2) phi(lam x) pairs with X_lam(x) = X(x / lam) / lam
    X = RadialPowerField(alpha, p, n)
    x = _regular_points(np.random.default_rng(seed), n, 20)
    np.testing.assert_allclose(scale_field(X, lam)(x), X(x / lam) / lam, rtol=1e-13)
