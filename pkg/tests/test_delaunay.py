import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capstab import delaunay as dl
from capstab.delaunay import DelaunayKind, MeridianState
from capstab.errors import AxisContactError, ConstructionError, ContainmentError

nonzero = st.floats(0.01, 5.0) | st.floats(-5.0, -0.01)


def test_rhs_rejects_axis():
    with pytest.raises(AxisContactError):
        dl.ode_rhs(MeridianState(0.0, 0.0, 0.0, 0.0), 1.0, 2)


def test_cylinder_is_an_equilibrium():
    start = dl.symmetric_start(2, 1.0, 0.25)
    assert start.x2 == pytest.approx(0.5)
    rhs = dl.ode_rhs(start, 1.0, 2)
    assert rhs == pytest.approx((1.0, 0.0, 0.0))
    curve = dl.integrate(2, 1.0, start, 1e-3, 2.0)
    assert np.ptp(curve.x2) == 0.0


@pytest.mark.parametrize("H, F, kind", [
    (1.0, 0.1, DelaunayKind.UNDULOID),
    (1.0, -0.1, DelaunayKind.NODOID),
    (-1.0, 0.1, DelaunayKind.NODOID),
    (0.0, 0.3, DelaunayKind.CATENOID),
    (1.0, 0.0, DelaunayKind.SPHERE),
    (0.0, 0.0, DelaunayKind.HYPERPLANE),
])
def test_classify_table(H, F, kind):
    assert dl.classify(H, F) is kind


def test_classify_cylinder_needs_dimension_or_state():
    assert dl.classify(1.0, 0.25) is DelaunayKind.UNDULOID
    assert dl.classify(1.0, 0.25, n=2) is DelaunayKind.CYLINDER
    assert dl.classify(1.0, 4 / 27, n=3) is DelaunayKind.CYLINDER
    assert dl.classify(1.0, 0.25, n=2, state=MeridianState(0, 0, 0.5, 0.0)) is DelaunayKind.CYLINDER


@settings(max_examples=200, deadline=None)
@given(nonzero, nonzero)
def test_classify_depends_on_sign_of_product(H, F):
    kind = dl.classify(H, F)
    if F * H < 0:
        assert kind is DelaunayKind.NODOID
    else:
        assert kind in (DelaunayKind.UNDULOID, DelaunayKind.CYLINDER)
    assert dl.classify(-H, -F) is kind


def test_classify_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        dl.classify(1.0, 0.1, tol=0.0)


def test_symmetric_radii_match_quadratic_for_surfaces():
    # n = 2: r - H r^2 = F at alpha = 0 and -r - H r^2 = F at alpha = pi
    roots = dl.symmetric_radii(2, 1.0, 0.1)
    expected = sorted([(0.5 - math.sqrt(0.15), 0.0), (0.5 + math.sqrt(0.15), 0.0)])
    assert [r for r, _ in roots] == pytest.approx([r for r, _ in expected], abs=1e-12)
    start = dl.symmetric_start(2, 1.0, -0.1)
    assert start.alpha == math.pi
    assert start.x2 == pytest.approx((-1 + math.sqrt(1.4)) / 2, abs=1e-12)


def test_catenoid_neck_equals_force():
    assert dl.symmetric_start(2, 0.0, 0.3).x2 == pytest.approx(0.3, abs=1e-12)


def test_force_drift_is_fourth_order():
    start = dl.symmetric_start(2, 1.0, 0.1)
    d1 = dl.integrate(2, 1.0, start, 1e-3, 10.0).force_drift()
    d2 = dl.integrate(2, 1.0, start, 5e-4, 10.0).force_drift()
    assert d1 <= 1e-8
    assert 14 <= d1 / d2 <= 18


def test_unduloid_extremes_and_period():
    curve = dl.integrate(2, 1.0, dl.symmetric_start(2, 1.0, 0.1), 1e-3, 20.0)
    crossings = dl.alpha_zero_crossings(curve)
    necks = [c[2] for c in crossings if c[3] == 1]
    bulges = [c[2] for c in crossings if c[3] == -1]
    assert np.allclose(necks, 0.5 - math.sqrt(0.15), atol=1e-10)
    assert np.allclose(bulges, 0.5 + math.sqrt(0.15), atol=1e-10)
    periods = np.diff([c[0] for c in crossings if c[3] == 1])
    assert np.ptp(periods) <= 1e-6


def test_integrator_is_mirror_symmetric():
    from capstab.verify import reversal_residual

    assert reversal_residual() <= 1e-12


def test_integrate_flags_axis_contact():
    curve = dl.integrate(2, 1.0, MeridianState(0.0, 0.0, 0.002, -math.pi / 2), 1e-3, 1.0)
    assert curve.axis_touching
    assert curve.x2.min() > dl.X2_MIN


def test_integrate_backward_keeps_arc_length_increasing():
    start = dl.symmetric_start(2, 1.0, 0.1)
    curve = dl.integrate(2, 1.0, start, 1e-2, 1.0, backward=True)
    assert np.all(np.diff(curve.s) > 0)
    assert curve.origin == len(curve) - 1
    assert curve.s[-1] == 0.0


def test_symmetric_segment_straddles_sphere():
    curve = dl.symmetric_segment(2, 1.0, 0.1)
    r2 = curve.x1**2 + curve.x2**2
    assert r2[0] > 1.0 and r2[-1] > 1.0
    assert np.all(r2[1:-1] <= 1.0)
    assert curve.meta["kind"] == "Unduloid"


def test_segment_errors():
    with pytest.raises(ContainmentError):
        dl.symmetric_segment(2, 0.1, 2.0)
    with pytest.raises(ConstructionError):
        dl.symmetric_segment(2, 1.0, 0.3)  # force beyond the cylinder value
    with pytest.raises(ConstructionError):
        dl.symmetric_start(2, 1.0, 0.0)


def test_higher_dimension_cylinder():
    start = dl.symmetric_start(3, 1.0, 4 / 27)
    assert start.x2 == pytest.approx(2 / 3)
    assert dl.symmetric_segment(3, 1.0, 4 / 27).force_drift() <= 1e-12


def test_csv_round_trip():
    curve = dl.integrate(2, 1.0, dl.symmetric_start(2, 1.0, 0.1), 0.1, 0.3)
    lines = curve.to_csv().splitlines()
    assert lines[0] == "s,x1,x2,alpha,force"
    row = [float(v) for v in lines[2].split(",")]
    assert row[:4] == [curve.s[1], curve.x1[1], curve.x2[1], curve.alpha[1]]
