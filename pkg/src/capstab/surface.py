"""Rotational capillary hypersurfaces in the unit ball.

A surface is the orbit of a meridian ``(x1(s), x2(s))`` under the
rotations fixing the ``x1`` axis: ``X(s, omega) = (x1(s), x2(s) * omega)``
with ``omega`` on the unit sphere of ``R^n``.  Its unit normal is
``N = (sin alpha, -cos alpha * omega)`` and points into the enclosed body.

Meridians are sampled on a uniform arc-length grid with an even number
of intervals, so composite Simpson applies everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.special import gamma

from . import delaunay as dl
from .delaunay import DelaunayKind, MeridianCurve
from .errors import (
    ConstructionError,
    DegenerateAngleError,
    NotCapillaryError,
    OrientationError,
)

NORMAL_CONVENTION = "N = (sin(alpha), -cos(alpha) * omega), pointing into the enclosed body"

ANGLE_MISMATCH_TOL = 1e-6
ANGLE_MARGIN = 1e-3
CLIP_TOL = 1e-13


def sphere_measure(k: int) -> float:
    """Area of the unit sphere ``S^k`` in ``R^(k+1)``."""
    return 2.0 * math.pi ** ((k + 1) / 2.0) / gamma((k + 1) / 2.0)


@dataclass(frozen=True)
class ShapeData:
    kappa_m: np.ndarray | float
    kappa_p: np.ndarray | float
    sigma_sq: np.ndarray | float


@dataclass(frozen=True)
class Ring:
    """A boundary component: one end of the meridian lying on the unit sphere."""

    index: int  # 0 or -1
    sign: float  # conormal nu = sign * meridian tangent


@dataclass(frozen=True, eq=False)
class RotationalCapillarySurface:
    n: int
    H: float
    F: float
    kind: DelaunayKind
    meridian: MeridianCurve
    kappa_m: np.ndarray
    kappa_p: np.ndarray
    rings: tuple
    theta: float | None
    recipe: dict = field(default_factory=dict)
    closed: bool = False

    @property
    def s(self):
        return self.meridian.s

    @property
    def x1(self):
        return self.meridian.x1

    @property
    def x2(self):
        return self.meridian.x2

    @property
    def alpha(self):
        return self.meridian.alpha

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def sigma_sq(self):
        return self.kappa_m**2 + (self.n - 1) * self.kappa_p**2

    @property
    def angular_measure(self) -> float:
        return sphere_measure(self.n - 1)

    @property
    def x_dot_n(self):
        """``<x, N>`` along the meridian."""
        return self.x1 * np.sin(self.alpha) - self.x2 * np.cos(self.alpha)

    @property
    def x_sq(self):
        return self.x1**2 + self.x2**2

    def refined(self, factor: int = 2) -> "RotationalCapillarySurface":
        """Same surface rebuilt with the grid step divided by ``factor``."""
        return rebuild(self, self.recipe["step"] / factor)

    def summary(self) -> dict:
        body = enclosed_body(self)
        return {
            "n": self.n,
            "H": self.H,
            "F": self.F,
            "kind": self.kind.value,
            "closed": self.closed,
            "theta": self.theta,
            "area_M": integrate_scalar(self, 1.0),
            "area_Omega": wetted_region(self).area,
            "volume_T": body.volume,
            "centroid": list(body.centroid),
            "normal_convention": NORMAL_CONVENTION,
            "grid": {"step": self.step, "samples": len(self.s)},
        }


# ---------------------------------------------------------------- construction


def _even_count(length: float, step: float) -> int:
    m = int(math.ceil(length / step - 1e-9))
    return m + (m % 2)


def _crossing(n, H, x1, x2, a, h, radius=1.0):
    """Partial RK4 step ``tau`` (signed like ``h``) landing on ``|X| = radius``, by bisection."""
    def excess(tau):
        y1, y2, _ = dl._rk4_step(x1, x2, a, tau, H, n)
        return y1 * y1 + y2 * y2 - radius * radius

    lo, hi = 0.0, h
    while abs(hi - lo) > 1e-12 * abs(h):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _regrid(n, H, start, half_length, m):
    h = half_length / m
    y0 = (0.0, start.x1, start.x2, start.alpha)
    fwd, hit_f = dl._run(n, H, y0, h, m)
    bwd, hit_b = dl._run(n, H, y0, -h, m)
    if hit_f or hit_b:
        raise ConstructionError("meridian reached the axis while regridding")
    return [np.concatenate([np.array(b[:0:-1]), np.array(f)]) for f, b in zip(fwd, bwd)]


def _clip_symmetric(meridian: MeridianCurve, step: float, clip_radius: float):
    n, H = meridian.n, meridian.H
    o = meridian.origin
    start = meridian.state(o)
    r2 = meridian.x1**2 + meridian.x2**2
    lengths = []
    for direction in (1, -1):
        idx = np.arange(o, len(r2)) if direction > 0 else np.arange(o, -1, -1)
        out = idx[r2[idx] > clip_radius**2]
        if out.size == 0:
            raise ConstructionError("meridian does not leave the ball; cannot clip")
        k = out[0] - direction
        tau = _crossing(n, H, meridian.x1[k], meridian.x2[k], meridian.alpha[k],
                        direction * meridian.step, clip_radius)
        lengths.append(abs(meridian.s[k] - meridian.s[o] + tau))
    if abs(lengths[0] - lengths[1]) > 1e-8:
        raise NotCapillaryError(f"meridian is not symmetric about x1 = 0 ({lengths[0]} vs {lengths[1]})")
    half = lengths[0]
    m = max(int(math.ceil(half / step - 1e-9)), 2)  # steps per side; 2m is even
    for _ in range(8):
        cols = _regrid(n, H, start, half, m)
        x1e, x2e, ae = cols[1][-1], cols[2][-1], cols[3][-1]
        rad = math.hypot(x1e, x2e)
        err = rad - clip_radius
        if abs(err) <= CLIP_TOL:
            break
        half -= err / ((x1e * math.cos(ae) + x2e * math.sin(ae)) / rad)
    return cols, 2 * m


def build(
    meridian: MeridianCurve,
    n: int | None = None,
    step: float | None = None,
    clip_radius: float = 1.0,
    recipe: dict | None = None,
) -> RotationalCapillarySurface:
    """Clip a symmetric Delaunay meridian to the unit ball and assemble the surface.

    The crossing with the unit sphere is located by bisection on a partial
    RK4 step, then the meridian is re-integrated on a uniform grid whose
    end points sit on the sphere to ``1e-13``.  ``clip_radius`` exists for
    negative controls only.
    """
    n = meridian.n if n is None else n
    if n != meridian.n:
        raise ValueError("dimension mismatch between meridian and surface")
    step = meridian.step if step is None else step
    kind = DelaunayKind(meridian.meta.get("kind", dl.classify(meridian.H, meridian.F, n=n).value))
    if kind in (DelaunayKind.SPHERE, DelaunayKind.HYPERPLANE) or meridian.analytic:
        raise ConstructionError("use the analytic constructors for spheres and hyperplanes")
    cols, count = _clip_symmetric(meridian, step, clip_radius)
    s, x1, x2, alpha = cols
    clipped = MeridianCurve(
        n, meridian.H, meridian.F, s, x1, x2, alpha,
        step=float(s[1] - s[0]), origin=count // 2, meta=dict(meridian.meta),
    )
    kappa_m = n * meridian.H - (n - 1) * np.cos(alpha) / x2
    kappa_p = np.cos(alpha) / x2
    rings = (Ring(0, -1.0), Ring(-1, 1.0))
    recipe = recipe or {"builder": "delaunay", "n": n, "H": meridian.H, "F": meridian.F,
                        "which": meridian.meta.get("which", "inner"), "step": step}
    surf = RotationalCapillarySurface(n, meridian.H, meridian.F, kind, clipped,
                                      kappa_m, kappa_p, rings, None, recipe)
    return _with_angle(surf)


def _with_angle(surf: RotationalCapillarySurface) -> RotationalCapillarySurface:
    if not surf.rings:
        return surf
    angles = ring_angles(surf)
    if max(angles) - min(angles) > ANGLE_MISMATCH_TOL:
        raise NotCapillaryError(f"contact angles differ between rings: {angles}")
    theta = float(np.mean(angles))
    if not ANGLE_MARGIN < theta < math.pi - ANGLE_MARGIN:
        raise DegenerateAngleError(f"contact angle {theta} too close to 0 or pi")
    return RotationalCapillarySurface(
        surf.n, surf.H, surf.F, surf.kind, surf.meridian, surf.kappa_m, surf.kappa_p,
        surf.rings, theta, surf.recipe, surf.closed,
    )


def from_delaunay(n: int, H: float, F: float, step: float = 1e-3, which: str = "inner") -> RotationalCapillarySurface:
    """Symmetric Delaunay capillary surface for ``(H, F)``; dispatches spheres and planes nowhere."""
    meridian = dl.symmetric_segment(n, H, F, step=step, which=which)
    return build(meridian, n, step)


def _analytic(n, H, F, kind, s, x1, x2, alpha, kappa_m, kappa_p, rings, recipe, closed=False):
    meridian = MeridianCurve(n, H, F, s, x1, x2, alpha, step=float(s[1] - s[0]),
                             analytic=True, meta={"kind": kind.value})
    surf = RotationalCapillarySurface(n, H, F, kind, meridian, kappa_m, kappa_p,
                                      tuple(rings), None, recipe, closed)
    return _with_angle(surf)


def flat_disk(n: int, offset: float = 0.0, step: float = 1e-3) -> RotationalCapillarySurface:
    """Totally geodesic disk ``{x1 = offset}`` with normal ``+e1``.

    The enclosed body is the part of the ball with ``x1 > offset``.
    """
    if not abs(offset) < 1.0:
        raise ConstructionError("plane offset must satisfy |offset| < 1")
    radius = math.sqrt(1.0 - offset * offset)
    m = _even_count(radius, step)
    s = np.linspace(0.0, radius, m + 1)
    zero = np.zeros_like(s)
    recipe = {"builder": "disk", "n": n, "offset": offset, "step": step}
    return _analytic(n, 0.0, 0.0, DelaunayKind.HYPERPLANE, s, zero + offset, s.copy(),
                     zero + math.pi / 2, zero.copy(), zero.copy(), [Ring(-1, 1.0)], recipe)


def equatorial_disk(n: int, step: float = 1e-3) -> RotationalCapillarySurface:
    return flat_disk(n, 0.0, step)


def _circle_meridian(radius, center, beta_lo, beta_hi, step):
    m = _even_count(radius * (beta_hi - beta_lo), step)
    beta = np.linspace(beta_lo, beta_hi, m + 1)
    s = radius * (beta - beta_lo)
    x1 = center + radius * np.sin(beta)
    x2 = radius * np.cos(beta)
    if beta_lo == -math.pi / 2:
        x2[0] = 0.0
    if beta_hi == math.pi / 2:
        x2[-1] = 0.0
    return s, x1, x2, -beta


def spherical_cap(n: int, radius: float, center: float, step: float = 1e-3) -> RotationalCapillarySurface:
    """Part inside the ball of the sphere of given radius centred at ``(center, 0, ..., 0)``.

    The normal points toward the sphere's centre, so ``H = 1/radius``.  The
    cap must meet the unit sphere and contain exactly one axis point.
    """
    if radius <= 0 or center == 0.0:
        raise ConstructionError("a cap needs radius > 0 and a non-zero centre offset")
    c, R = float(center), float(radius)
    if not abs(1.0 - R) < abs(c) < 1.0 + R:
        raise ConstructionError("sphere does not cross the unit sphere")
    k = (1.0 - c * c - R * R) / (2.0 * c * R)
    inside_lo = abs(c - R) < 1.0  # axis point at beta = -pi/2
    inside_hi = abs(c + R) < 1.0  # axis point at beta = +pi/2
    if inside_lo == inside_hi:
        raise ConstructionError("cap must contain exactly one axis point")
    beta_star = math.asin(max(-1.0, min(1.0, k)))
    if inside_lo:
        lo, hi, rings = -math.pi / 2, beta_star, [Ring(-1, 1.0)]
    else:
        lo, hi, rings = beta_star, math.pi / 2, [Ring(0, -1.0)]
    s, x1, x2, alpha = _circle_meridian(R, c, lo, hi, step)
    curv = np.full_like(s, 1.0 / R)
    recipe = {"builder": "cap", "n": n, "radius": R, "center": c, "step": step}
    return _analytic(n, 1.0 / R, 0.0, DelaunayKind.SPHERE, s, x1, x2, alpha,
                     curv, curv.copy(), rings, recipe)


def closed_sphere(n: int, radius: float, step: float = 1e-3) -> RotationalCapillarySurface:
    """Round sphere centred at the origin, inside the ball; no boundary."""
    if not 0.0 < radius < 1.0:
        raise ConstructionError("closed sphere radius must lie in (0, 1)")
    s, x1, x2, alpha = _circle_meridian(radius, 0.0, -math.pi / 2, math.pi / 2, step)
    curv = np.full_like(s, 1.0 / radius)
    recipe = {"builder": "closed_sphere", "n": n, "radius": radius, "step": step}
    return _analytic(n, 1.0 / radius, 0.0, DelaunayKind.SPHERE, s, x1, x2, alpha,
                     curv, curv.copy(), [], recipe, closed=True)


def rebuild(surface: RotationalCapillarySurface, step: float) -> RotationalCapillarySurface:
    r = dict(surface.recipe)
    builder = r.pop("builder")
    r["step"] = step
    if builder == "delaunay":
        return from_delaunay(r["n"], r["H"], r["F"], step, r.get("which", "inner"))
    if builder == "disk":
        return flat_disk(r["n"], r["offset"], step)
    if builder == "cap":
        return spherical_cap(r["n"], r["radius"], r["center"], step)
    if builder == "closed_sphere":
        return closed_sphere(r["n"], r["radius"], step)
    raise ValueError(f"unknown builder {builder!r}")


def from_parameters(n: int, H: float, F: float, step: float = 1e-3, offset: float = 0.0,
                    closed: bool = False, tol: float = 1e-10) -> RotationalCapillarySurface:
    """Dispatch on the Delaunay kind of ``(H, F)``.

    Spheres (``F = 0``) need an axial ``offset`` for their centre, or
    ``closed=True`` for the centred closed sphere.
    """
    kind = dl.classify(H, F, tol, n=n)
    if kind is DelaunayKind.HYPERPLANE:
        return flat_disk(n, offset, step)
    if kind is DelaunayKind.SPHERE:
        if closed:
            return closed_sphere(n, 1.0 / abs(H), step)
        if H < 0:
            raise ConstructionError("caps are built with the normal toward the centre (H > 0)")
        return spherical_cap(n, 1.0 / H, offset, step)
    return from_delaunay(n, H, F, step)


# ---------------------------------------------------------------- pointwise geometry


def _check_s(surface, s):
    lo, hi = surface.s[0], surface.s[-1]
    if np.any(np.asarray(s) < lo - 1e-12) or np.any(np.asarray(s) > hi + 1e-12):
        raise ValueError(f"s outside [{lo}, {hi}]")


def point(surface, s, omega):
    _check_s(surface, s)
    omega = np.asarray(omega, dtype=float)
    x1 = np.interp(s, surface.s, surface.x1)
    x2 = np.interp(s, surface.s, surface.x2)
    return np.concatenate([[x1], x2 * omega])


def normal(surface, s, omega):
    _check_s(surface, s)
    omega = np.asarray(omega, dtype=float)
    a = np.interp(s, surface.s, surface.alpha)
    return np.concatenate([[math.sin(a)], -math.cos(a) * omega])


def shape_data(surface, s=None) -> ShapeData:
    """Principal curvatures; arrays over the grid when ``s`` is None."""
    if s is None:
        return ShapeData(surface.kappa_m, surface.kappa_p, surface.sigma_sq)
    _check_s(surface, s)
    km = float(np.interp(s, surface.s, surface.kappa_m))
    kp = float(np.interp(s, surface.s, surface.kappa_p))
    return ShapeData(km, kp, km * km + (surface.n - 1) * kp * kp)


def _ring_frame(surface, ring):
    """Meridian-plane vectors (axial, radial) at a ring: x, nu, N, nu_bar, sphere tangent."""
    i = ring.index
    x = np.array([surface.x1[i], surface.x2[i]])
    a = surface.alpha[i]
    nu = ring.sign * np.array([math.cos(a), math.sin(a)])
    N = np.array([math.sin(a), -math.cos(a)])
    xhat = x / np.linalg.norm(x)
    t_sph = np.array([-xhat[1], xhat[0]])  # direction of increasing polar angle from +e1
    # Omega lies on the side N points to, so its outward conormal has <nu_bar, N> < 0
    nu_bar = -math.copysign(1.0, float(t_sph @ N)) * t_sph
    return x, nu, N, nu_bar, t_sph


def ring_angles(surface) -> list[float]:
    """Contact angle at every ring, from ``cos(theta) = <nu, nu_bar>``.

    The sign of ``sin(theta) = <nu, x>`` must agree (positive).
    """
    out = []
    for ring in surface.rings:
        x, nu, N, nu_bar, _ = _ring_frame(surface, ring)
        cos_t = float(nu @ nu_bar)
        sin_t = float(nu @ (x / np.linalg.norm(x)))
        if sin_t <= 0.0 or abs(sin_t - math.sqrt(max(0.0, 1.0 - cos_t * cos_t))) > 1e-8:
            raise OrientationError(f"inconsistent contact angle: cos={cos_t}, sin={sin_t}")
        out.append(math.acos(max(-1.0, min(1.0, cos_t))))
    return out


def contact_angle(surface) -> float:
    if not surface.rings:
        raise ValueError("closed surface has no contact angle")
    return float(np.mean(ring_angles(surface)))


def robin_coefficients(surface) -> list[float]:
    t = surface.theta
    return [1.0 / math.sin(t) + surface.kappa_m[r.index] / math.tan(t) for r in surface.rings]


def robin_coefficient(surface) -> float:
    """``q = 1/sin(theta) + cot(theta) * sigma(nu, nu)``; ``nu`` is the meridian direction."""
    return float(np.mean(robin_coefficients(surface)))


def capillarity_residual(surface) -> float:
    """Defect of the boundary condition ``nu - cos(theta) nu_bar = sin(theta) x`` plus the spread of H."""
    bdry = 0.0
    if surface.rings:
        t = surface.theta
        for ring in surface.rings:
            x, nu, _, nu_bar, _ = _ring_frame(surface, ring)
            bdry = max(bdry, float(np.linalg.norm(nu - math.cos(t) * nu_bar - math.sin(t) * x)))
    mean_curv = (surface.kappa_m + (surface.n - 1) * surface.kappa_p) / surface.n
    return bdry + float(np.max(np.abs(mean_curv - surface.H)))


def plane_contact_angle(surface) -> float:
    """Angle of a cap with the hyperplane through its boundary ring, in the same convention.

    ``cos = <N, P>`` and ``sin = <nu, P>`` with ``P`` the unit normal of the
    plane pointing away from the cap.
    """
    if len(surface.rings) != 1:
        raise ValueError("defined for surfaces with a single boundary ring")
    ring = surface.rings[0]
    _, nu, N, _, _ = _ring_frame(surface, ring)
    i = ring.index
    # the cap lies on the side of the plane containing its axis point
    P = np.array([math.copysign(1.0, surface.x1[i] - surface.x1[-1 - i]), 0.0])
    return math.atan2(float(nu @ P), float(N @ P))


# ---------------------------------------------------------------- integration


def integrate_scalar(surface, g, mode: int = 0) -> float:
    """Integral over M of a separable integrand.

    ``g`` is the radial profile on the grid (array, scalar, or callable of the
    surface).  ``mode=0`` integrates ``g`` against the full angular measure;
    ``mode=1`` integrates a product of two mode-1 profiles, where the angular
    factor ``omega_j**2`` contributes ``|S^(n-1)| / n``.
    """
    if mode not in (0, 1):
        raise ValueError("only angular modes 0 and 1 are separable here")
    if callable(g):
        g = g(surface)
    g = np.broadcast_to(np.asarray(g, dtype=float), surface.s.shape)
    factor = surface.angular_measure / (surface.n if mode == 1 else 1)
    return factor * float(simpson(g * surface.x2 ** (surface.n - 1), dx=surface.step))


def product_grid_integral(surface, integrand, n_psi: int = 64, rotation=None):
    """Brute-force integral over M for ``n = 2`` on an ``(s, psi)`` tensor grid.

    ``integrand(X, N)`` receives ambient points and normals of shape
    ``(len(s), n_psi, 3)`` and returns values whose first two axes are the
    grid.  Simpson in ``s``, trapezoid (spectral for periodic data) in
    ``psi``.  ``rotation`` moves the whole surface rigidly first.
    """
    if surface.n != 2:
        raise ValueError("product grid oracle exists for n = 2 only")
    psi = np.linspace(0.0, 2.0 * math.pi, n_psi, endpoint=False)
    om = np.stack([np.cos(psi), np.sin(psi)], axis=-1)
    x1 = surface.x1[:, None, None]
    x2 = surface.x2[:, None, None]
    a = surface.alpha[:, None, None]
    X = np.concatenate([np.broadcast_to(x1, (len(surface.s), n_psi, 1)), x2 * om[None]], axis=-1)
    N = np.concatenate([np.broadcast_to(np.sin(a), (len(surface.s), n_psi, 1)), -np.cos(a) * om[None]], axis=-1)
    if rotation is not None:
        X = X @ np.asarray(rotation).T
        N = N @ np.asarray(rotation).T
    vals = np.asarray(integrand(X, N), dtype=float)
    jac = surface.x2.reshape((-1, 1) + (1,) * (vals.ndim - 2))
    inner = vals.mean(axis=1) * 2.0 * math.pi  # trapezoid over a full period
    return simpson(inner * jac[:, 0], dx=surface.step, axis=0)


# ---------------------------------------------------------------- wetted region and body


@dataclass(frozen=True)
class WettedRegion:
    """Region of the unit sphere, as polar-angle intervals from ``+e1`` with multiplicities."""

    intervals: tuple  # ((psi_lo, psi_hi, multiplicity), ...)
    area: float
    first_moment: np.ndarray

    @property
    def max_multiplicity(self) -> int:
        return max((m for _, _, m in self.intervals), default=0)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _polar_integral(f, lo, hi):
    if hi <= lo:
        return 0.0
    t = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * float(_GL_WEIGHTS @ f(t))


def wetted_region(surface) -> WettedRegion:
    """The part of the unit sphere on the side the normal points to at each ring.

    Crossing a ring in the direction of increasing polar angle raises the
    multiplicity by one when the region lies beyond it and lowers it
    otherwise; the constant is fixed so the minimum multiplicity is zero.
    """
    n = surface.n
    dim = n + 1
    if not surface.rings:
        return WettedRegion((), 0.0, np.zeros(dim))
    cuts = []
    for ring in surface.rings:
        x, _, _, nu_bar, t_sph = _ring_frame(surface, ring)
        psi = math.atan2(x[1], x[0])
        beyond = float(-nu_bar @ t_sph) > 0.0
        cuts.append((psi, 1 if beyond else -1))
    cuts.sort()
    edges = [0.0] + [c[0] for c in cuts] + [math.pi]
    level = [0]
    for _, jump in cuts:
        level.append(level[-1] + jump)
    base = min(level)
    intervals = tuple(
        (edges[i], edges[i + 1], level[i] - base)
        for i in range(len(level)) if level[i] - base > 0
    )
    S = sphere_measure(n - 1)
    area = sum(m * S * _polar_integral(lambda t: np.sin(t) ** (n - 1), a, b) for a, b, m in intervals)
    axial = sum(m * S * _polar_integral(lambda t: np.cos(t) * np.sin(t) ** (n - 1), a, b)
                for a, b, m in intervals)
    moment = np.zeros(dim)
    moment[0] = axial
    return WettedRegion(intervals, float(area), moment)


@dataclass(frozen=True)
class EnclosedBody:
    volume: float
    centroid: np.ndarray
    moment: np.ndarray  # integral of x over T
    multiplicity_flag: bool = False


def axial_phi_profile(surface):
    """Radial part of the test function for ``xi = e1`` (angular mode 0)."""
    a = surface.alpha
    return -(1.0 + surface.x_sq) * np.sin(a) + 2.0 * surface.x_dot_n * surface.x1


def transverse_phi_profile(surface):
    """Radial part for ``xi = e_j, j >= 2``; the test function is this times ``omega_j``."""
    a = surface.alpha
    return (1.0 + surface.x_sq) * np.cos(a) + 2.0 * surface.x_dot_n * surface.x2


def enclosed_body(surface) -> EnclosedBody:
    """Volume and mass centre of the generalized body bounded by M and the wetted region.

    Volume from the divergence of the position field; first moments from the
    integral of the axial test function, ``int_T x1 = -int_M phi[e1] / (2(n+1))``.
    Transverse moments vanish by rotational symmetry.
    """
    n = surface.n
    region = wetted_region(surface)
    flux = integrate_scalar(surface, -surface.x_dot_n)
    volume = (flux + region.area) / (n + 1)
    if volume <= 0.0:
        raise OrientationError(f"enclosed volume {volume} is not positive")
    moment = np.zeros(n + 1)
    moment[0] = -integrate_scalar(surface, axial_phi_profile(surface)) / (2.0 * (n + 1))
    return EnclosedBody(volume, moment / volume, moment, region.max_multiplicity > 1)


def direct_moment(surface) -> np.ndarray:
    """``int_T x`` from the divergence of ``x_A x``, which equals ``(n+2) x_A``."""
    n = surface.n
    region = wetted_region(surface)
    out = np.zeros(n + 1)
    out[0] = (integrate_scalar(surface, -surface.x1 * surface.x_dot_n) + region.first_moment[0]) / (n + 2)
    return out
