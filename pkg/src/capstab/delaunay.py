"""Meridians of rotational constant-mean-curvature hypersurfaces.

The generating curve ``(x1(s), x2(s))`` in the half-plane ``x2 > 0`` is
parametrized by arc length, with tangent angle ``alpha`` measured from the
positive ``x1`` axis and unit normal ``N = (sin alpha, -cos alpha)``.  It
solves::

    x1' = cos(alpha)
    x2' = sin(alpha)
    alpha' = -n H + (n - 1) cos(alpha) / x2

and conserves the force ``x2**(n-1) cos(alpha) - H x2**n``.
"""
from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .errors import AxisContactError, ConstructionError, ContainmentError

X2_MIN = 1e-6
ROOT_XTOL = 1e-12
ROOT_UPPER = 10.0


class DelaunayKind(str, enum.Enum):
    UNDULOID = "Unduloid"
    CYLINDER = "Cylinder"
    NODOID = "Nodoid"
    SPHERE = "Sphere"
    CATENOID = "Catenoid"
    HYPERPLANE = "Hyperplane"


@dataclass(frozen=True)
class MeridianState:
    s: float
    x1: float
    x2: float
    alpha: float


@dataclass(frozen=True, eq=False)
class MeridianCurve:
    """Arc-length samples of a meridian, stored column-wise.

    ``axis_touching`` is set when integration was cut short because the
    curve came within ``X2_MIN`` of the axis.  ``origin`` is the index of
    the state the integration started from.
    """

    n: int
    H: float
    F: float
    s: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    alpha: np.ndarray
    step: float
    origin: int = 0
    axis_touching: bool = False
    analytic: bool = False
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.s)

    @property
    def states(self) -> list[MeridianState]:
        return [MeridianState(*row) for row in zip(self.s, self.x1, self.x2, self.alpha)]

    def state(self, i: int) -> MeridianState:
        return MeridianState(self.s[i], self.x1[i], self.x2[i], self.alpha[i])

    def forces(self) -> np.ndarray:
        return force_array(self.x2, self.alpha, self.H, self.n)

    def force_drift(self) -> float:
        return float(np.max(np.abs(self.forces() - self.F)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("s,x1,x2,alpha,force\n")
        for row in zip(self.s, self.x1, self.x2, self.alpha, self.forces()):
            buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
        return buf.getvalue()


def ode_rhs(state: MeridianState, H: float, n: int) -> tuple[float, float, float]:
    if state.x2 <= 0.0:
        raise AxisContactError(f"x2 = {state.x2} <= 0: the ODE is singular on the axis")
    return _rhs(state.x2, state.alpha, H, n)


def _rhs(x2, alpha, H, n):
    c = math.cos(alpha)
    return c, math.sin(alpha), -n * H + (n - 1) * c / x2


def force(state: MeridianState, H: float, n: int) -> float:
    return state.x2 ** (n - 1) * math.cos(state.alpha) - H * state.x2**n


def force_array(x2, alpha, H, n):
    x2 = np.asarray(x2, dtype=float)
    return x2 ** (n - 1) * np.cos(alpha) - H * x2**n


def _rk4_step(x1, x2, a, h, H, n):
    k1 = _rhs(x2, a, H, n)
    k2 = _rhs(x2 + 0.5 * h * k1[1], a + 0.5 * h * k1[2], H, n)
    k3 = _rhs(x2 + 0.5 * h * k2[1], a + 0.5 * h * k2[2], H, n)
    k4 = _rhs(x2 + h * k3[1], a + h * k3[2], H, n)
    w = h / 6.0
    return (
        x1 + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x2 + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        a + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    )


def _run(n, H, y0, h, max_steps, last=None, stop=None, x2_min=X2_MIN):
    """Fixed-step RK4 from ``y0 = (s, x1, x2, alpha)``; ``h`` may be negative.

    Takes ``max_steps`` full steps, then one partial step of size ``last``
    if given.  ``stop(x1, x2, alpha)`` ends the run after the first state
    for which it returns True.  Returns the column lists and a flag telling
    whether the axis was hit.
    """
    s, x1, x2, a = y0
    cols = ([s], [x1], [x2], [a])
    steps = [h] * max_steps
    if last:
        steps.append(last)
    for i, hh in enumerate(steps):
        x1, x2, a = _rk4_step(x1, x2, a, hh, H, n)
        s = y0[0] + h * (i + 1) if i < max_steps else s + hh
        if x2 <= x2_min:
            return cols, True
        cols[0].append(s)
        cols[1].append(x1)
        cols[2].append(x2)
        cols[3].append(a)
        if stop is not None and stop(x1, x2, a):
            break
    return cols, False


def integrate(
    n: int,
    H: float,
    init: MeridianState,
    step: float,
    length: float,
    backward: bool = False,
    x2_min: float = X2_MIN,
) -> MeridianCurve:
    """Classical RK4 over ``[init.s, init.s + length]`` (or backwards).

    A trajectory that reaches ``x2 <= x2_min`` is truncated and flagged
    ``axis_touching``; the caller decides whether that is an error.
    """
    if init.x2 <= 0.0:
        raise AxisContactError("initial state lies on the axis")
    if step <= 0.0 or length <= 0.0:
        raise ValueError("step and length must be positive")
    full = int(math.floor(length / step + 1e-9))
    rest = length - full * step
    if rest <= 1e-12 * step:
        rest = 0.0
    h = -step if backward else step
    cols, hit = _run(
        n, H, (init.s, init.x1, init.x2, init.alpha), h, full,
        last=(-rest if backward else rest) or None, x2_min=x2_min,
    )
    arrays = [np.array(c) for c in cols]
    if backward:
        arrays = [c[::-1] for c in arrays]
    F = force(init, H, n)
    return MeridianCurve(
        n, H, F, *arrays, step=step,
        origin=len(arrays[0]) - 1 if backward else 0, axis_touching=hit,
    )


def cylinder_radius(H: float, n: int) -> float:
    return (n - 1) / (n * H)


def max_force(H: float, n: int) -> float:
    """Largest force attainable with ``alpha = 0`` (the cylinder value) for ``H > 0``."""
    r = cylinder_radius(H, n)
    return r ** (n - 1) - H * r**n


def classify(
    H: float,
    F: float,
    tol: float = 1e-10,
    n: int | None = None,
    state: MeridianState | None = None,
) -> DelaunayKind:
    """Delaunay type from the pair ``(H, F)``.

    ``FH > 0`` is a cylinder when ``state`` is the ODE equilibrium, or when
    ``n`` is given and ``F`` equals the cylinder force; otherwise an unduloid.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    h0 = abs(H) <= tol
    f0 = abs(F) <= tol
    if h0 and f0:
        return DelaunayKind.HYPERPLANE
    if f0:
        return DelaunayKind.SPHERE
    if h0:
        return DelaunayKind.CATENOID
    if F * H < 0:
        return DelaunayKind.NODOID
    if state is not None:
        dim = n if n is not None else 2
        r = cylinder_radius(abs(H), dim)
        equilibrium = abs(math.sin(state.alpha)) <= tol and abs(state.x2 - r) <= tol
        if equilibrium:
            return DelaunayKind.CYLINDER
    elif n is not None and abs(F - math.copysign(max_force(abs(H), n), H)) <= tol:
        return DelaunayKind.CYLINDER
    return DelaunayKind.UNDULOID


def _force_at_rest(r, H, n, sign):
    # force with alpha = 0 (sign=+1) or alpha = pi (sign=-1)
    return sign * r ** (n - 1) - H * r**n


def symmetric_radii(n: int, H: float, F: float, tol: float = 1e-10) -> list[tuple[float, float]]:
    """All ``(x2, alpha)`` with ``alpha in {0, pi}`` and ``x2 in (0, 10]`` matching the force.

    Roots are bracketed on the monotone pieces of the force profile and
    refined by bisection to ``1e-12``.  The cylinder radius is returned
    directly when ``F`` equals the extremal force (a double root).
    """
    found = []
    lo = 1e-14
    for sign, alpha in ((1.0, 0.0), (-1.0, math.pi)):
        def g(r, sign=sign):
            return _force_at_rest(r, H, n, sign) - F

        cuts = [lo]
        if H != 0.0:
            r_star = cylinder_radius(abs(H), n)
            if lo < r_star < ROOT_UPPER:
                if abs(g(r_star)) <= tol:
                    found.append((r_star, alpha))
                    continue
                cuts.append(r_star)
        cuts.append(ROOT_UPPER)
        for a, b in zip(cuts[:-1], cuts[1:]):
            ga, gb = g(a), g(b)
            if ga == 0.0:
                found.append((a, alpha))
            elif ga * gb < 0.0:
                found.append((bisect(g, a, b, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps), alpha))
            elif gb == 0.0 and b == ROOT_UPPER:
                found.append((b, alpha))
    return sorted(found)


def symmetric_start(n: int, H: float, F: float, which: str = "inner", tol: float = 1e-10) -> MeridianState:
    """Point of the meridian on ``{x1 = 0}`` where the tangent is horizontal.

    ``which="inner"`` picks the smallest admissible radius (the neck of an
    unduloid, the small loop of a nodoid), ``"outer"`` the largest.
    """
    kind = classify(H, F, tol, n=n)
    if kind in (DelaunayKind.SPHERE, DelaunayKind.HYPERPLANE):
        raise ConstructionError(f"{kind.value} meridians touch the axis; build them analytically")
    roots = symmetric_radii(n, H, F, tol)
    if not roots:
        raise ConstructionError(f"no symmetric starting point for (H, F) = ({H}, {F})")
    r, alpha = roots[0] if which == "inner" else roots[-1]
    return MeridianState(0.0, 0.0, r, alpha)


def symmetric_segment(
    n: int,
    H: float,
    F: float,
    step: float = 1e-3,
    which: str = "inner",
    max_length: float = 50.0,
    tol: float = 1e-10,
) -> MeridianCurve:
    """Meridian through its symmetric point, integrated both ways until it leaves the unit ball.

    Each side stops at the first sample with ``x1**2 + x2**2 > 1``; the
    samples therefore straddle the sphere and :func:`capstab.surface.build`
    refines the crossing.
    """
    start = symmetric_start(n, H, F, which, tol)
    if start.x2 >= 1.0:
        raise ContainmentError(f"symmetric point x2 = {start.x2:.6g} lies outside the unit ball")
    max_steps = int(math.ceil(max_length / step))

    def outside(x1, x2, a):
        return x1 * x1 + x2 * x2 > 1.0

    y0 = (0.0, start.x1, start.x2, start.alpha)
    fwd, hit_f = _run(n, H, y0, step, max_steps, stop=outside)
    bwd, hit_b = _run(n, H, y0, -step, max_steps, stop=outside)
    if hit_f or hit_b:
        raise AxisContactError(f"meridian for (H, F) = ({H}, {F}) reaches the axis")
    for cols in (fwd, bwd):
        if cols[1][-1] ** 2 + cols[2][-1] ** 2 <= 1.0:
            raise ContainmentError(f"meridian for (H, F) = ({H}, {F}) never reaches the unit sphere")
    arrays = [np.concatenate([np.array(b[:0:-1]), np.array(f)]) for f, b in zip(fwd, bwd)]
    kind = classify(H, F, tol, n=n, state=start)
    # the requested force labels the curve; the root error (~1e-12) shows up as drift
    return MeridianCurve(
        n, H, F, *arrays, step=step, origin=len(bwd[0]) - 1,
        meta={"kind": kind.value, "which": which},
    )


def alpha_zero_crossings(curve: MeridianCurve) -> list[tuple[float, float, float, int]]:
    """Points where ``alpha`` changes sign, refined by bisection on a partial RK4 step.

    Returns ``(s, x1, x2, direction)`` with ``direction = +1`` for an increasing
    ``alpha`` (a neck of an unduloid) and ``-1`` for a decreasing one (a bulge).
    """
    out = []
    a = curve.alpha
    for i in np.nonzero(np.sign(a[:-1]) * np.sign(a[1:]) < 0)[0]:
        h = curve.s[i + 1] - curve.s[i]
        y = (curve.x1[i], curve.x2[i], a[i])

        def alpha_at(tau):
            return _rk4_step(*y, tau, curve.H, curve.n)[2]

        tau = bisect(alpha_at, 0.0, h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        x1, x2, _ = _rk4_step(*y, tau, curve.H, curve.n)
        out.append((float(curve.s[i] + tau), float(x1), float(x2), 1 if a[i + 1] > a[i] else -1))
    return out
