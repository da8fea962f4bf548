import math

import numpy as np
import pytest
from scipy.optimize import brentq

from capstab import surface as sf
from capstab import verify as vf
from capstab.errors import DomainError, NotApplicableError

E1, E2 = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])


@pytest.fixture(scope="module")
def unduloid():
    return sf.from_delaunay(2, 1.0, 0.1, 2e-3)


def test_robin_identity_and_negative_control(unduloid):
    assert vf.check_boundary_robin(unduloid) <= 1e-5
    assert vf.check_boundary_robin(unduloid, q_scale=1.01) > 1e-3


def test_robin_converges(unduloid):
    conv = vf.check_boundary_robin_convergence(unduloid)
    assert conv.order >= 0.9


def test_disk_robin_is_exact():
    assert vf.check_boundary_robin(sf.equatorial_disk(2)) <= 1e-10


@pytest.mark.parametrize("xi", [E1, E2])
@pytest.mark.parametrize("params", [(1.0, 0.1), (1.0, -0.1)])
def test_jacobi_identity_is_second_order(params, xi):
    conv = vf.check_jacobi_identity(sf.from_delaunay(2, *params, 2e-3), xi)
    assert 1.8 <= conv.order <= 2.2
    assert conv.order == pytest.approx(conv.order_all)


def test_jacobi_stencil_exact_on_cylinder():
    # the test-function profiles are quadratics in s, so second differences are exact
    conv = vf.check_jacobi_identity(sf.from_delaunay(2, 1.0, 0.25), E1)
    assert conv.exact and conv.order is None
    assert max(conv.residuals) <= 1e-8


def test_convergence_check_on_synthetic_data():
    c = vf.ConvergenceCheck((4e-4, 1e-4, 2.5e-5), (1e-2, 5e-3, 2.5e-3), (1e-12,) * 3)
    assert c.order == pytest.approx(2.0)
    floor = vf.ConvergenceCheck((1e-13, 3e-13, 2e-13), (1e-2, 5e-3, 2.5e-3), (1e-12,) * 3)
    assert floor.exact and floor.order is None


def test_principal_direction(unduloid):
    assert vf.check_principal_direction(unduloid) <= 1e-8


def test_flow_preserves_contact_angle(unduloid):
    assert vf.check_conformal_flow_angle(unduloid, E2, 0.05) <= 1e-8
    assert vf.check_conformal_flow_angle(unduloid, E1, -0.05) <= 1e-8
    with pytest.raises(DomainError):
        vf.check_conformal_flow_angle(unduloid, E1, 0.5)


def test_centroid_consistency(unduloid):
    assert vf.check_centroid_consistency(unduloid) <= 1e-10
    assert vf.check_centroid_consistency(sf.spherical_cap(2, 0.8, 0.7)) <= 1e-10


def test_critical_catenoid_force():
    # meridian a cosh(x1/a) meets the sphere orthogonally when u tanh u = 1, u = x1/a
    u = brentq(lambda v: v * math.tanh(v) - 1.0, 0.5, 2.0, xtol=1e-15)
    F_exact = 1.0 / math.sqrt(u * u + math.cosh(u) ** 2)
    F, surf = vf.critical_catenoid()
    assert F == pytest.approx(F_exact, abs=1e-10)
    assert F == pytest.approx(0.46048508825, abs=1e-10)
    assert abs(surf.theta - math.pi / 2) <= 1e-8
    assert vf.check_free_boundary_centroid(surf) <= 1e-8


def test_free_boundary_check_requires_orthogonality(unduloid):
    with pytest.raises(NotApplicableError):
        vf.check_free_boundary_centroid(unduloid)


def test_cap_identity_only_for_caps(unduloid):
    assert vf.check_cap_angle_identity(sf.spherical_cap(2, 0.8, 0.7)) <= 1e-12
    with pytest.raises(NotApplicableError):
        vf.check_cap_angle_identity(unduloid)


def test_closed_surface_has_no_boundary_checks():
    with pytest.raises(NotApplicableError):
        vf.check_boundary_robin(sf.closed_sphere(2, 0.5))


def test_conformal_residuals_small_sample():
    r = vf.conformal_residuals(count=10**4)
    assert r["norm_identity"] <= 1e-12 and r["tangency"] <= 1e-12
    assert 1.8 <= r["flow_derivative_order"] <= 2.2


def test_residual_block_keys(unduloid):
    block = vf.residual_block(unduloid, levels=2)
    assert list(block) == ["robin", "jacobi", "principal_direction", "flow_angle",
                           "centroid_consistency", "free_boundary", "capillarity"]
    assert block["free_boundary"] is None


def test_suite_gates_and_injected_error():
    surfaces = {"unduloid": sf.from_delaunay(2, 1.0, 0.1, 2e-3)}
    assert all(g.passed for g in vf.lemma_gates(surfaces, levels=2))
    failed = [g for g in vf.lemma_gates(surfaces, levels=2, q_scale=1.01) if not g.passed]
    assert [g.check for g in failed] == ["check_boundary_robin"]
    with pytest.raises(ValueError):
        vf.run_suite("nonsense")


def test_delaunay_suite_passes():
    assert all(g.passed for g in vf.delaunay_gates())
