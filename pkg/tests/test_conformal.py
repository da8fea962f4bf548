import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capstab import conformal as cf
from capstab.errors import DomainError

coord = st.floats(-1.0, 1.0, allow_nan=False)
vec3 = st.tuples(coord, coord, coord).map(np.array)


def _into_ball(v, r):
    norm = np.linalg.norm(v)
    return v if norm < 1e-9 else v / norm * r


@settings(max_examples=200, deadline=None)
@given(vec3, vec3, st.floats(0.0, 0.95), st.floats(0.0, 1.0))
def test_norm_identity_holds_everywhere(a, x, ra, rx):
    a, x = _into_ball(a, ra), _into_ball(x, rx)
    assert cf.norm_identity_residual(a, x) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(vec3, vec3)
def test_field_is_tangent_to_sphere(xi, x):
    if np.linalg.norm(x) < 1e-6:
        x = np.array([0.0, 0.0, 1.0])
    x = x / np.linalg.norm(x)
    assert abs(cf.killing_field(xi, x) @ x) <= 1e-14 * max(1.0, np.linalg.norm(xi))


def test_map_sends_a_to_origin():
    a = np.array([0.3, -0.2, 0.5])
    assert np.allclose(cf.mobius_map(a, a), 0.0, atol=1e-15)


def test_zero_parameter_is_identity():
    x = np.array([[0.1, 0.2, 0.3], [1.0, 0.0, 0.0]])
    assert np.array_equal(cf.mobius_map(np.zeros(3), x), x)
    assert np.array_equal(cf.flow([0.0, 1.0, 0.0], 0.0, x), x)


def test_frozen_values_on_axis():
    # hand evaluation of the closed form at a = (1/2, 0, 0)
    a = np.array([0.5, 0.0, 0.0])
    assert np.allclose(cf.mobius_map(a, np.zeros(3)), [-0.5, 0.0, 0.0])
    assert np.allclose(cf.mobius_map(a, [1.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    assert np.allclose(cf.mobius_map(a, [-1.0, 0.0, 0.0]), [-1.0, 0.0, 0.0])
    assert cf.conformal_factor(a, np.zeros(3)) == pytest.approx(0.75)


def test_sphere_maps_to_sphere():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(1000, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y = cf.flow([0.0, 0.0, 0.6, 0.8], 0.7, x)
    assert np.max(np.abs(np.linalg.norm(y, axis=1) - 1.0)) <= 1e-12


def test_conformal_factor_matches_jacobian_singular_values():
    a = np.array([0.2, 0.4, -0.1])
    x = np.array([-0.3, 0.1, 0.5])
    h = 1e-6
    J = np.column_stack([(cf.mobius_map(a, x + h * e) - cf.mobius_map(a, x - h * e)) / (2 * h)
                         for e in np.eye(3)])
    sv = np.linalg.svd(J, compute_uv=False)
    assert np.allclose(sv, cf.conformal_factor(a, x), rtol=1e-8)


def test_flow_derivative_is_second_order():
    xi = np.array([0.0, 0.6, 0.8])
    x = np.array([0.2, -0.3, 0.4])
    errs = [np.linalg.norm((cf.flow(xi, h, x) - cf.flow(xi, -h, x)) / (2 * h) - cf.killing_field(xi, x))
            for h in (1e-3, 5e-4)]
    assert np.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.05)


def test_divergence_against_finite_differences():
    xi = np.array([0.3, -0.5, 0.8])
    x = np.array([0.1, 0.2, -0.4])
    h = 1e-5
    div = sum((cf.killing_field(xi, x + h * e)[k] - cf.killing_field(xi, x - h * e)[k]) / (2 * h)
              for k, e in enumerate(np.eye(3)))
    assert div == pytest.approx(cf.field_divergence(xi, x), abs=1e-8)


def test_two_forms_of_test_function_agree():
    rng = np.random.default_rng(3)
    xi, x, N = rng.normal(size=(3, 50, 3))
    N /= np.linalg.norm(N, axis=1, keepdims=True)
    assert np.allclose(cf.test_function(xi, x, N), cf.test_function_dual(xi, x, N), atol=1e-13)


def test_jacobi_image_on_sphere_through_origin_vanishes():
    # centred sphere of radius R: N = -x/R, H = 1/R so N + Hx = 0
    x = np.array([0.0, 0.3, 0.4])
    assert cf.jacobi_image([1.0, 2.0, 3.0], x, -x / 0.5, 2.0, 2) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("a, x", [
    ([1.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ([0.0, 0.0, 0.0], [1.1, 0.0, 0.0]),
    ([0.0, 0.0], [0.0, 0.0]),
])
def test_domain_errors(a, x):
    with pytest.raises(DomainError):
        cf.mobius_map(a, x)


def test_flow_parameter_must_stay_in_ball():
    with pytest.raises(DomainError):
        cf.flow([1.0, 0.0, 0.0], 1.0, [0.0, 0.0, 0.0])


@pytest.mark.parametrize("t", [-0.9, -0.3, 0.4, 0.95])
def test_flow_fixes_both_poles(t):
    xi = np.array([0.0, 0.6, 0.8])
    assert np.allclose(cf.flow(xi, t, xi), xi, atol=1e-14)
    assert np.allclose(cf.flow(xi, t, -xi), -xi, atol=1e-14)
