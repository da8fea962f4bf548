"""Numerical oracles for the closed-form identities behind the stability form.

Each check computes one side of an identity by finite differences or
quadrature and the other side in closed form, then returns the residual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import conformal as cf
from . import delaunay as dl
from . import surface as sf
from . import stability as st
from .errors import DomainError, NotApplicableError

AXIS_MARGIN = 0.05


def _split(xi, n):
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (n + 1,):
        raise ValueError(f"direction must have {n + 1} components")
    return abs(xi[0]), float(np.linalg.norm(xi[1:]))


def _profiles(surf):
    return sf.axial_phi_profile(surf), sf.transverse_phi_profile(surf)


def boundary_robin_defects(surf, q_scale: float = 1.0):
    """``phi_nu - q phi`` at each ring for the axial and transverse profiles."""
    if not surf.rings:
        raise NotApplicableError("closed surface has no boundary")
    ga, gt = _profiles(surf)
    da, dt = st.derivative(ga, surf.step), st.derivative(gt, surf.step)
    out = []
    for ring, q in zip(surf.rings, sf.robin_coefficients(surf)):
        i, sgn = ring.index, ring.sign
        q = q * q_scale
        out.append((sgn * da[i] - q * ga[i], sgn * dt[i] - q * gt[i]))
    return out


def check_boundary_robin(surf, xi=None, q_scale: float = 1.0) -> float:
    """Max of ``|phi_nu - q phi|`` over the boundary.

    ``phi_nu`` comes from one-sided differences of the test function along
    the meridian.  Without ``xi`` the axis and transverse directions are both
    checked; ``q_scale`` perturbs q for negative controls.
    """
    worst = 0.0
    for ra, rt in boundary_robin_defects(surf, q_scale):
        if xi is None:
            worst = max(worst, abs(ra), abs(rt))
        else:
            wa, wt = _split(xi, surf.n)
            worst = max(worst, wa * abs(ra) + wt * abs(rt))
    return worst


def jacobi_defect(surf, xi) -> np.ndarray:
    """Pointwise ``|L_h phi - (-2n <xi, N + Hx>)|`` on interior samples away from the axis."""
    n, H = surf.n, surf.H
    wa, wt = _split(xi, n)
    ga, gt = _profiles(surf)
    a = surf.alpha
    lhs_a = st.laplacian(surf, ga, 0) + surf.sigma_sq * ga
    lhs_t = st.laplacian(surf, gt, 1) + surf.sigma_sq * gt
    rhs_a = -2.0 * n * (np.sin(a) + H * surf.x1)
    rhs_t = -2.0 * n * (-np.cos(a) + H * surf.x2)
    err = wa * np.abs(lhs_a - rhs_a) + wt * np.abs(lhs_t - rhs_t)
    keep = np.zeros(len(err), dtype=bool)
    keep[1:-1] = True
    keep &= surf.x2 > AXIS_MARGIN
    return err[keep]


EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ConvergenceCheck:
    """Residuals of one identity on successively halved grids.

    ``floors`` estimate the round-off level of each residual (cancellation
    in the difference stencil); levels at or below their floor carry no
    truncation information.
    """

    residuals: tuple
    steps: tuple
    floors: tuple

    @property
    def residual(self) -> float:
        return self.residuals[0]

    @property
    def resolved(self) -> list[int]:
        return [i for i, (r, f) in enumerate(zip(self.residuals, self.floors)) if r > f]

    @property
    def exact(self) -> bool:
        """No level rises above round-off: the stencil reproduces the identity."""
        return not self.resolved

    @staticmethod
    def _slope(res, steps):
        return float(np.polyfit(np.log(steps), np.log(np.maximum(res, 1e-300)), 1)[0])

    @property
    def order_all(self) -> float:
        """Least-squares slope of ``log residual`` against ``log step`` over every level."""
        return self._slope(self.residuals, self.steps)

    @property
    def order(self) -> float | None:
        """Slope over the levels above round-off; None when fewer than two remain."""
        idx = self.resolved
        if len(idx) < 2:
            return None
        return self._slope([self.residuals[i] for i in idx], [self.steps[i] for i in idx])

    def as_dict(self) -> dict:
        return {"residual": self.residual, "order": self.order, "order_all_levels": self.order_all,
                "levels": [list(p) for p in zip(self.steps, self.residuals)]}


def _profile_scale(surf):
    ga, gt = _profiles(surf)
    return float(max(np.max(np.abs(ga)), np.max(np.abs(gt)), 1.0))


def _second_difference_floor(surf):
    return 16.0 * EPS * _profile_scale(surf) / surf.step**2


def _first_difference_floor(surf):
    return 16.0 * EPS * _profile_scale(surf) / surf.step


def _levels(surf, levels):
    out = [surf]
    for _ in range(levels - 1):
        out.append(out[-1].refined(2))
    return out


def check_jacobi_identity(surf, xi, levels: int = 3) -> ConvergenceCheck:
    """Discrete ``(Laplacian + |sigma|^2) phi[xi]`` against ``-2n <xi, N + Hx>``.

    The Laplace-Beltrami operator is separated into its meridian part
    (second differences) and its angular part (exact for modes 0 and 1);
    the interior maximum is recorded on ``levels`` successively halved grids.
    """
    grids = _levels(surf, levels)
    res = tuple(float(np.max(jacobi_defect(g, xi))) for g in grids)
    return ConvergenceCheck(res, tuple(g.step for g in grids),
                            tuple(_second_difference_floor(g) for g in grids))


def check_boundary_robin_convergence(surf, levels: int = 3) -> ConvergenceCheck:
    grids = _levels(surf, levels)
    return ConvergenceCheck(tuple(check_boundary_robin(g) for g in grids), tuple(g.step for g in grids),
                            tuple(_first_difference_floor(g) for g in grids))


def _ring_basis(n):
    """A point ``omega`` on ``S^(n-1)`` and an orthonormal basis of its tangent space."""
    eye = np.eye(n)
    return [(eye[k], [eye[j] for j in range(n) if j != k]) for k in range(n)] + \
           [(-eye[k], [eye[j] for j in range(n) if j != k]) for k in range(n)]


def _rotate(omega, v, d):
    return math.cos(d) * omega + math.sin(d) * v


def check_principal_direction(surf, delta: float = 1e-4) -> float:
    """``max |sigma(nu, X)|`` over ring tangents ``X``, from differences of N along the ring."""
    if not surf.rings:
        raise NotApplicableError("closed surface has no boundary")
    worst = 0.0
    for ring in surf.rings:
        i = ring.index
        s_b = surf.s[i]
        a = surf.alpha[i]
        for omega, tangents in _ring_basis(surf.n):
            nu = ring.sign * np.concatenate([[math.cos(a)], math.sin(a) * omega])
            for v in tangents:
                dN = (sf.normal(surf, s_b, _rotate(omega, v, delta))
                      - sf.normal(surf, s_b, _rotate(omega, v, -delta))) / (2 * delta)
                # arc length along the ring is x2 * delta
                worst = max(worst, abs(float(dN @ nu)) / surf.x2[i])
    return worst


def _one_sided(f, h):
    # fourth-order one-sided first derivative; f[k] sampled at k*h
    return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)


def _central(f_of, d):
    return (-f_of(2 * d) + 8 * f_of(d) - 8 * f_of(-d) + f_of(-2 * d)) / (12 * d)


def flowed_contact_angles(surf, xi, t: float, delta: float = 1e-3) -> list[float]:
    """Contact angles of ``f_t(M)`` at sample points of every ring.

    Tangents of the image are differences of flowed points: the meridian
    samples next to the ring and rotated copies of the ring point.
    """
    if not surf.rings:
        raise NotApplicableError("closed surface has no boundary")
    if abs(t) > 0.1:
        raise DomainError("flow parameter limited to |t| <= 0.1")
    xi = np.asarray(xi, dtype=float)
    h = surf.step
    out = []
    for ring in surf.rings:
        i = ring.index
        inward = np.arange(5) if i == 0 else len(surf.s) - 1 - np.arange(5)
        for omega, tangents in _ring_basis(surf.n):
            def X(k, om):
                return np.concatenate([[surf.x1[k]], surf.x2[k] * om])

            p = cf.flow(xi, t, X(inward[0], omega))
            if abs(np.linalg.norm(p) - 1.0) > 1e-12:
                raise DomainError("flowed boundary point left the unit sphere")
            pts = np.array([cf.flow(xi, t, X(k, omega)) for k in inward])
            inward_tangent = _one_sided(pts, h)
            ring_t = [_central(lambda d: cf.flow(xi, t, X(inward[0], _rotate(omega, v, d))), delta)
                      for v in tangents]
            basis, _ = np.linalg.qr(np.array(ring_t).T)
            nu = -inward_tangent
            nu -= basis @ (basis.T @ nu)
            nu /= np.linalg.norm(nu)
            seed = np.concatenate([[math.sin(surf.alpha[i])], -math.cos(surf.alpha[i]) * omega])
            N = seed - basis @ (basis.T @ seed) - (seed @ nu) * nu
            N /= np.linalg.norm(N)
            out.append(math.atan2(float(nu @ p), float(N @ p)))
    return out


def check_conformal_flow_angle(surf, xi, t: float) -> float:
    """``max |theta(t) - theta(0)|`` over ring samples of the flowed surface."""
    return max(abs(a - surf.theta) for a in flowed_contact_angles(surf, xi, t))


def check_centroid_consistency(surf) -> float:
    """``int_M phi[e_A]`` against ``-2(n+1) int_T x_A`` from the divergence of ``x_A x``."""
    masses = st.phi_mass_coordinates(surf)
    direct = sf.direct_moment(surf)
    return float(np.max(np.abs(masses + 2.0 * (surf.n + 1) * direct)))


def check_free_boundary_centroid(surf) -> float:
    """``max_A |int_M x_A da| / |M|`` for a minimal surface meeting the sphere orthogonally."""
    if abs(surf.H) > 1e-10 or surf.theta is None or abs(surf.theta - math.pi / 2) > 1e-8 \
            or sf.capillarity_residual(surf) > 1e-8:
        raise NotApplicableError("requires H = 0, theta = pi/2 and a capillary surface")
    area = sf.integrate_scalar(surf, 1.0)
    # transverse first moments are mode-1 integrals and vanish identically
    return abs(sf.integrate_scalar(surf, surf.x1)) / area


def check_cap_angle_identity(surf) -> float:
    """Robin coefficients of a cap agree in the ball and in the half-space cut by its boundary plane."""
    if surf.kind is not dl.DelaunayKind.SPHERE or surf.closed:
        raise NotApplicableError("defined for spherical caps")
    R = 1.0 / surf.H
    t, tp = surf.theta, sf.plane_contact_angle(surf)
    return abs(1.0 / math.sin(t) + 1.0 / (math.tan(t) * R) - 1.0 / (math.tan(tp) * R))


def critical_catenoid(n: int = 2, step: float = 1e-3, tol: float = 1e-8):
    """Catenoid segment meeting the sphere orthogonally, by bisection on the force.

    Returns ``(F, surface)``.
    """
    def excess(F):
        return sf.from_delaunay(n, 0.0, F, step).theta - math.pi / 2

    grid = np.linspace(0.05, 0.95, 19)
    vals = []
    for F in grid:
        try:
            vals.append(excess(F))
        except Exception:
            vals.append(np.nan)
    for (a, fa), (b, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0:
            F = bisect(excess, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps)
            surf = sf.from_delaunay(n, 0.0, F, step)
            if abs(surf.theta - math.pi / 2) > tol:
                raise NotApplicableError(f"bisection ended {surf.theta - math.pi / 2:.2e} from pi/2")
            return F, surf
    raise NotApplicableError("no sign change of theta - pi/2 on the force grid")


# ---------------------------------------------------------------- conformal identities


def conformal_residuals(count: int = 10**6, n: int = 2, seed: int = 0, hs=(1e-3, 5e-4)) -> dict:
    """Norm identity and sphere tangency on random points, flow-derivative error at two steps."""
    rng = np.random.default_rng(seed)
    dim = n + 1

    def in_ball(k, scale=1.0):
        v = rng.normal(size=(k, dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return v * (scale * rng.random((k, 1)) ** (1.0 / dim))

    a = in_ball(count, 0.95)
    x = in_ball(count)
    norm = float(np.max(cf.norm_identity_residual(a, x)))
    xi = rng.normal(size=(count, dim))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    on_sphere = rng.normal(size=(count, dim))
    on_sphere /= np.linalg.norm(on_sphere, axis=1, keepdims=True)
    tang = float(np.max(np.abs(np.sum(cf.killing_field(xi, on_sphere) * on_sphere, axis=1))))
    sphere_flow = float(np.max(np.abs(np.linalg.norm(cf.flow(xi[0], 0.3, on_sphere), axis=1) - 1.0)))
    m = min(count, 10**4)
    flow_err = []
    for h in hs:
        fd = (cf.flow(xi[0], h, x[:m]) - cf.flow(xi[0], -h, x[:m])) / (2 * h)
        flow_err.append(float(np.max(np.linalg.norm(fd - cf.killing_field(xi[0], x[:m]), axis=1))))
    order = math.log(flow_err[0] / flow_err[1]) / math.log(hs[0] / hs[1])
    return {"norm_identity": norm, "tangency": tang, "sphere_to_sphere": sphere_flow,
            "flow_derivative": flow_err, "flow_derivative_order": order}


# ---------------------------------------------------------------- residual block for reports


def residual_block(surf, levels: int = 3, q_scale: float = 1.0) -> dict:
    """All applicable checks for one surface; None marks a check that does not apply."""
    dim = surf.n + 1
    axis = np.eye(dim)[0]
    transverse = np.eye(dim)[1]
    out = {"robin": None, "jacobi": None, "principal_direction": None, "flow_angle": None,
           "centroid_consistency": check_centroid_consistency(surf), "free_boundary": None,
           "capillarity": sf.capillarity_residual(surf)}
    jac = {}
    for name, xi in (("axis", axis), ("transverse", transverse)):
        jac[name] = check_jacobi_identity(surf, xi, levels).as_dict()
    out["jacobi"] = jac
    if surf.rings:
        out["robin"] = check_boundary_robin(surf, q_scale=q_scale)
        out["principal_direction"] = check_principal_direction(surf)
        out["flow_angle"] = max(check_conformal_flow_angle(surf, axis, 0.05),
                                check_conformal_flow_angle(surf, transverse, 0.05))
    try:
        out["free_boundary"] = check_free_boundary_centroid(surf)
    except NotApplicableError:
        pass
    return out


# ---------------------------------------------------------------- gated suites

SUITES = ("conformal", "delaunay", "lemmas", "centroid")
ROBIN_GATE = 1e-5
ORDER_BAND = (1.8, 2.2)


@dataclass(frozen=True)
class Gate:
    suite: str
    target: str
    check: str
    value: float | None
    limit: str
    passed: bool


def battery(n: int = 2, step: float = 1e-3) -> dict:
    """Built-in example surfaces, keyed by name."""
    return {
        "disk": sf.equatorial_disk(n, step),
        "cap": sf.spherical_cap(n, 0.8, 0.7, step),
        "cylinder": sf.from_delaunay(n, 1.0, dl.max_force(1.0, n), step),
        "unduloid": sf.from_delaunay(n, 1.0, 0.1, step),
        "nodoid": sf.from_delaunay(n, 1.0, -0.1, step),
        "critical-catenoid": critical_catenoid(n, step)[1],
        "sphere": sf.closed_sphere(n, 0.5, step),
    }


def _le(suite, target, check, value, limit):
    return Gate(suite, target, check, value, f"<= {limit:g}", bool(value is not None and value <= limit))


def _order_gate(suite, target, check, conv: ConvergenceCheck, band=ORDER_BAND):
    order = conv.order
    if order is None:
        return Gate(suite, target, check, conv.residual, "round-off (exact stencil)", True)
    lo, hi = band
    return Gate(suite, target, check, order, f"order in [{lo:g}, {hi:g}]", bool(lo <= order <= hi))


def conformal_gates(count: int = 10**6) -> list[Gate]:
    r = conformal_residuals(count)
    return [
        _le("conformal", "random", "norm_identity", r["norm_identity"], 1e-12),
        _le("conformal", "random", "tangency", r["tangency"], 1e-12),
        _le("conformal", "random", "sphere_to_sphere", r["sphere_to_sphere"], 1e-12),
        Gate("conformal", "random", "flow_derivative_order", r["flow_derivative_order"],
             "order in [1.8, 2.2]", bool(1.8 <= r["flow_derivative_order"] <= 2.2)),
    ]


def force_drift_ratio(n=2, H=1.0, F=0.1, step=1e-3, length=10.0):
    start = dl.symmetric_start(n, H, F)
    d1 = dl.integrate(n, H, start, step, length).force_drift()
    d2 = dl.integrate(n, H, start, step / 2, length).force_drift()
    return d1, d1 / d2


def reversal_residual(n=2, H=1.0, F=0.1, step=1e-3, length=5.0) -> float:
    """Mirror symmetry ``(s, x1, alpha) -> (-s, -x1, -alpha)`` of the integrator about a neck."""
    start = dl.symmetric_start(n, H, F)
    f = dl.integrate(n, H, start, step, length)
    b = dl.integrate(n, H, start, step, length, backward=True)
    k = len(f)
    return float(max(np.max(np.abs(f.x1 + b.x1[::-1][:k])), np.max(np.abs(f.x2 - b.x2[::-1][:k])),
                     np.max(np.abs(f.alpha + b.alpha[::-1][:k]))))


def periodicity_residual(n=2, H=1.0, F=0.1, step=1e-3, length=20.0) -> float:
    """Spread of periods and of neck/bulge radii over successive unduloid periods."""
    curve = dl.integrate(n, H, dl.symmetric_start(n, H, F), step, length)
    spread = 0.0
    for d in (1, -1):
        pts = [c for c in dl.alpha_zero_crossings(curve) if c[3] == d]
        if len(pts) < 3:
            raise NotApplicableError("fewer than two periods integrated")
        periods = np.diff([p[0] for p in pts])
        radii = np.array([p[2] for p in pts])
        spread = max(spread, float(np.ptp(periods)), float(np.ptp(radii)))
    return spread


def delaunay_gates(battery_surfaces=None) -> list[Gate]:
    drift, ratio = force_drift_ratio()
    gates = [
        _le("delaunay", "unduloid(1,0.1)", "force_drift", drift, 1e-8),
        Gate("delaunay", "unduloid(1,0.1)", "drift_ratio", ratio, "in [14, 18]", bool(14 <= ratio <= 18)),
        _le("delaunay", "unduloid(1,0.1)", "reversal_symmetry", reversal_residual(), 1e-12),
        _le("delaunay", "unduloid(1,0.1)", "periodicity", periodicity_residual(), 1e-6),
    ]
    for name, surf in (battery_surfaces or {}).items():
        if surf.meridian is None or not surf.meridian.meta.get("kind"):
            continue
        gates.append(_le("delaunay", name, "clipped_force_drift", surf.meridian.force_drift(), 1e-8))
    return gates


def lemma_gates(surfaces: dict, levels: int = 3, q_scale: float = 1.0) -> list[Gate]:
    out = []
    dim_axes = None
    for name, surf in surfaces.items():
        dim_axes = np.eye(surf.n + 1)
        for label, xi in (("axis", dim_axes[0]), ("transverse", dim_axes[1])):
            out.append(_order_gate("lemmas", name, f"check_jacobi_identity[{label}]",
                                   check_jacobi_identity(surf, xi, levels)))
        if not surf.rings:
            continue
        out.append(_le("lemmas", name, "check_boundary_robin",
                       check_boundary_robin(surf, q_scale=q_scale), ROBIN_GATE))
        conv = check_boundary_robin_convergence(surf, levels)
        order = conv.order
        out.append(Gate("lemmas", name, "check_boundary_robin[order]", conv.residual if order is None else order,
                        "order >= 0.9", bool(order is None or order >= 0.9)))
        out.append(_le("lemmas", name, "check_principal_direction", check_principal_direction(surf), 1e-8))
        out.append(_le("lemmas", name, "check_conformal_flow_angle",
                       max(check_conformal_flow_angle(surf, x, 0.05) for x in dim_axes[:2]), 1e-8))
        out.append(_le("lemmas", name, "capillarity", sf.capillarity_residual(surf), 1e-8))
        if surf.kind is dl.DelaunayKind.SPHERE:
            out.append(_le("lemmas", name, "check_cap_angle_identity", check_cap_angle_identity(surf), 1e-12))
        try:
            out.append(_le("lemmas", name, "check_free_boundary_centroid", check_free_boundary_centroid(surf), 1e-8))
        except NotApplicableError:
            pass
    return out


def centroid_gates(surfaces: dict) -> list[Gate]:
    out = []
    for name, surf in surfaces.items():
        out.append(_le("centroid", name, "check_centroid_consistency", check_centroid_consistency(surf), 1e-6))
        trace, bound = st.trace_bound(surf)
        out.append(_le("centroid", name, "trace_minus_bound", trace - bound, 1e-6))
        out.append(_le("centroid", name, "trace_bound", bound, 1e-6))
        if surf.closed:
            q = st.q_form(surf).Q
            out.append(_le("centroid", name, "closed_sphere_Q", float(np.max(np.abs(q))), 1e-10))
    return out


def run_suite(suite: str = "all", levels: int = 3, q_scale: float = 1.0, n: int = 2,
              step: float = 1e-3, count: int = 10**6) -> list[Gate]:
    """Gate results for ``suite`` (one of :data:`SUITES` or ``"all"``) over the battery."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    wanted = SUITES if suite == "all" else (suite,)
    surfaces = battery(n, step) if set(wanted) & {"delaunay", "lemmas", "centroid"} else {}
    gates = []
    if "conformal" in wanted:
        gates += conformal_gates(count)
    if "delaunay" in wanted:
        gates += delaunay_gates(surfaces)
    if "lemmas" in wanted:
        gates += lemma_gates(surfaces, levels, q_scale)
    if "centroid" in wanted:
        gates += centroid_gates(surfaces)
    return gates
