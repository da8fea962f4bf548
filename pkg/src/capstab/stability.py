"""Quadratic form of the conformal test functions and the stability verdict.

For a direction ``xi`` the test function is ``phi[xi] = <Y[xi], N>``, and

    Q(xi1, xi2) = -2n int_M <xi1, N + Hx> <xi2, (1+|x|^2) N - 2<x,N> x> da

equals the second variation of the capillary energy along ``phi[xi]``
whenever ``int_M phi da = 0``.  On a rotational surface with axis ``e1``
the axis direction is angular mode 0 and the transverse directions are
mode 1, so Q is diagonal with ``n`` equal transverse entries.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import surface as sf
from .delaunay import DelaunayKind
from .eigen import jacobi_eigh
from .errors import PrecisionError

CONVERGENCE_RTOL = 1e-6


class Verdict(str, enum.Enum):
    STABLE_KNOWN = "Stable(known)"
    UNSTABLE_MASS_CENTER = "Unstable(mass-center)"
    UNSTABLE_TWO_NEGATIVE = "Unstable(two-negative-eigenvalues)"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class StabilityForm:
    Q: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def inf_norm(self) -> float:
        return float(np.max(np.sum(np.abs(self.Q), axis=1)))

    def value(self, xi1, xi2=None) -> float:
        xi2 = xi1 if xi2 is None else xi2
        return float(np.asarray(xi1) @ self.Q @ np.asarray(xi2))

    def negative_count(self, tol: float) -> int:
        return int(np.sum(self.eigenvalues < -tol))


@dataclass(eq=False)
class StabilityReport:
    surface: dict
    form: StabilityForm
    trace: float
    trace_bound: float
    centroid: np.ndarray
    phi_mass: np.ndarray
    verdict: Verdict
    witness: dict
    residuals: dict = field(default_factory=dict)

    @property
    def lambda_min(self) -> float:
        return self.form.lambda_min

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "Q": self.form.Q.tolist(),
            "eigenvalues": self.form.eigenvalues.tolist(),
            "trace": self.trace,
            "trace_bound": self.trace_bound,
            "lambda_min": self.lambda_min,
            "centroid": list(map(float, self.centroid)),
            "phi_mass": list(map(float, self.phi_mass)),
            "verdict": self.verdict.value,
            "verdict_witness": self.witness,
            "residuals": self.residuals,
        }


def _first_factor(surf):
    """Axial and radial parts of ``N + Hx``."""
    a = surf.alpha
    return np.sin(a) + surf.H * surf.x1, -np.cos(a) + surf.H * surf.x2


def _second_factor(surf):
    """Axial and radial parts of ``(1+|x|^2) N - 2<x,N> x``."""
    a = surf.alpha
    xx, xn = surf.x_sq, surf.x_dot_n
    return (1.0 + xx) * np.sin(a) - 2.0 * xn * surf.x1, -(1.0 + xx) * np.cos(a) - 2.0 * xn * surf.x2


def _assemble(surf) -> np.ndarray:
    n = surf.n
    ua, ur = _first_factor(surf)
    wa, wr = _second_factor(surf)
    Q = np.zeros((n + 1, n + 1))
    Q[0, 0] = -2.0 * n * sf.integrate_scalar(surf, ua * wa, mode=0)
    transverse = -2.0 * n * sf.integrate_scalar(surf, ur * wr, mode=1)
    for j in range(1, n + 1):
        Q[j, j] = transverse
    return Q


def q_form(surf, certify: bool = True) -> StabilityForm:
    """Assemble Q and diagonalize it.

    With ``certify`` the matrix is recomputed on the surface rebuilt at
    half the grid step; a relative change above ``1e-6`` raises
    :class:`PrecisionError`.
    """
    Q = _assemble(surf)
    if certify:
        Q2 = _assemble(surf.refined(2))
        scale = max(np.max(np.abs(Q2)), 1.0)
        change = np.max(np.abs(Q2 - Q)) / scale
        if change > CONVERGENCE_RTOL:
            raise PrecisionError(f"Q changed by {change:.3e} (relative) under grid halving")
    w, V = jacobi_eigh(Q)
    return StabilityForm(Q, w, V)


def product_grid_q(surf, n_psi: int = 64, rotation=None) -> np.ndarray:
    """Q from the full ``n = 2`` tensor-grid quadrature of the ambient integrand.

    Every entry ``Q_AB`` is integrated on its own, with no symmetry or
    block structure assumed.
    """
    H = surf.H

    def integrand(X, N):
        xx = np.sum(X * X, axis=-1)[..., None]
        xn = np.sum(X * N, axis=-1)[..., None]
        U = N + H * X
        W = (1.0 + xx) * N - 2.0 * xn * X
        return U[..., :, None] * W[..., None, :]

    return -2.0 * surf.n * sf.product_grid_integral(surf, integrand, n_psi=n_psi, rotation=rotation)


def trace_integrand(surf):
    xn, xx = surf.x_dot_n, surf.x_sq
    return surf.H * xn * (1.0 - xx) + 1.0 + xx - 2.0 * xn**2


def trace_bound(surf) -> tuple[float, float]:
    """Trace of Q from its own integrand, and ``-int_M |grad |x|^2|^2 da``.

    The gradient of ``|x|^2`` along M is ``2 (x1 cos a + x2 sin a)`` times
    the unit meridian tangent.
    """
    trace = -2.0 * surf.n * sf.integrate_scalar(surf, trace_integrand(surf))
    radial_rate = surf.x1 * np.cos(surf.alpha) + surf.x2 * np.sin(surf.alpha)
    bound = -sf.integrate_scalar(surf, 4.0 * radial_rate**2)
    return trace, bound


# ---------------------------------------------------------------- discrete operators


def derivative(g, h):
    """Second-order first derivative on a uniform grid, one-sided at the ends."""
    return np.gradient(g, h, edge_order=2)


def second_derivative(g, h):
    g = np.asarray(g, dtype=float)
    out = np.empty_like(g)
    out[1:-1] = (g[2:] - 2.0 * g[1:-1] + g[:-2]) / (h * h)
    out[0] = (2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]) / (h * h)
    out[-1] = (2.0 * g[-1] - 5.0 * g[-2] + 4.0 * g[-3] - g[-4]) / (h * h)
    return out


def laplacian(surf, g, mode: int):
    """Laplace-Beltrami of ``g(s) * Y`` divided by ``Y``, for a degree-``mode`` harmonic ``Y``.

    ``g'' + (n-1)(r'/r) g' - mode(n+mode-2) g / r^2`` with ``r = x2``; values at
    axis points (``r = 0``) are set to zero since they carry no measure.
    """
    if mode not in (0, 1):
        raise ValueError("only angular modes 0 and 1 are supported")
    n, h, r = surf.n, surf.step, surf.x2
    g = np.asarray(g, dtype=float)
    d1 = derivative(g, h)
    d2 = second_derivative(g, h)
    out = np.zeros_like(g)
    ok = r > 0.0
    out[ok] = d2[ok] + (n - 1) * np.sin(surf.alpha[ok]) / r[ok] * d1[ok] \
        - mode * (n + mode - 2) * g[ok] / r[ok] ** 2
    return out


def second_variation(surf, mode: int, g, q_scale: float = 1.0) -> float:
    """Second variation of the capillary energy along ``f = g(s) * Y_mode``.

    Interior term ``-int (Lf) f`` plus, on surfaces with boundary, the
    boundary term ``int (df/dnu - q f) f`` with one-sided differences.
    """
    if mode not in (0, 1):
        raise ValueError("only angular modes 0 and 1 are supported")
    g = np.asarray(g, dtype=float)
    Lg = laplacian(surf, g, mode) + surf.sigma_sq * g
    value = -sf.integrate_scalar(surf, Lg * g, mode=mode)
    if surf.closed or not surf.rings:
        return value
    d1 = derivative(g, surf.step)
    factor = surf.angular_measure / (surf.n if mode == 1 else 1)
    for ring, q in zip(surf.rings, sf.robin_coefficients(surf)):
        i = ring.index
        g_nu = ring.sign * d1[i]
        value += factor * (g_nu - q_scale * q * g[i]) * g[i] * surf.x2[i] ** (surf.n - 1)
    return value


# ---------------------------------------------------------------- mass of the test functions


def phi_mass_coordinates(surf) -> np.ndarray:
    """``int_M phi[e_A] da`` for every coordinate direction."""
    out = np.zeros(surf.n + 1)
    out[0] = sf.integrate_scalar(surf, sf.axial_phi_profile(surf))
    return out


def phi_mass(surf, xi) -> float:
    """``int_M phi[xi] da``; linear in ``xi``."""
    return float(np.asarray(xi, dtype=float) @ phi_mass_coordinates(surf))


def mean_zero_combination(surf, form: StabilityForm, tol_eig: float):
    """Unit combination of the two lowest negative eigenvectors with zero phi-mass.

    Returns None when fewer than two eigenvalues lie below ``-tol_eig``.
    """
    if form.negative_count(tol_eig) < 2:
        return None
    xi1, xi2 = form.eigenvectors[:, 0], form.eigenvectors[:, 1]
    p1, p2 = phi_mass(surf, xi1), phi_mass(surf, xi2)
    norm = math.hypot(p1, p2)
    c1, c2 = (p2 / norm, -p1 / norm) if norm > 0.0 else (1.0, 0.0)
    xi = c1 * xi1 + c2 * xi2
    return {
        "c1": c1,
        "c2": c2,
        "xi": xi.tolist(),
        "phi_mass": phi_mass(surf, xi),
        "q_value": form.value(xi),
        "q_from_eigenvalues": c1 * c1 * form.lambda_min + c2 * c2 * float(form.eigenvalues[1]),
    }


def default_tol_eig(form: StabilityForm) -> float:
    return 1e-8 * form.inf_norm


def verdict(surf, form: StabilityForm, tol_centroid: float = 1e-6, tol_eig: float | None = None) -> StabilityReport:
    """Stability decision with the numbers that justify it.

    1. Planes and round spheres are stable by construction kind.
    2. Mass centre at the origin and a negative eigenvalue: the eigenvector's
       test function has zero mass and negative second variation.
    3. Two negative eigenvalues: a zero-mass combination of their eigenvectors
       has negative second variation.
    4. Otherwise inconclusive.
    """
    tol_eig = default_tol_eig(form) if tol_eig is None else tol_eig
    body = sf.enclosed_body(surf)
    trace, bound = trace_bound(surf)
    masses = phi_mass_coordinates(surf)
    negatives = form.negative_count(tol_eig)
    combo = mean_zero_combination(surf, form, tol_eig)
    centroid_norm = float(np.linalg.norm(body.centroid))
    witness = {
        "negative_eigenvalues": negatives,
        "tol_centroid": tol_centroid,
        "tol_eig": tol_eig,
        "centroid_norm": centroid_norm,
        "two_negative_combination": combo,
    }
    # a zero-mass test function needs |phi_mass| at the scale allowed by tol_centroid
    tol_mass = 2.0 * (surf.n + 1) * body.volume * max(tol_centroid, 0.0)

    if surf.kind in (DelaunayKind.HYPERPLANE, DelaunayKind.SPHERE):
        witness["rule"] = "totally geodesic disk or round sphere piece: stable by kind"
        result = Verdict.STABLE_KNOWN
    elif centroid_norm <= tol_centroid and form.lambda_min < -tol_eig and \
            abs(phi_mass(surf, form.eigenvectors[:, 0])) <= tol_mass:
        xi = form.eigenvectors[:, 0]
        witness.update(rule="mass centre at origin, negative eigenvalue", xi=xi.tolist(),
                       q_value=form.value(xi), phi_mass=phi_mass(surf, xi))
        result = Verdict.UNSTABLE_MASS_CENTER
    elif combo is not None and abs(combo["phi_mass"]) <= tol_mass and combo["q_value"] < -tol_eig:
        witness["rule"] = "two negative eigenvalues, zero-mass combination"
        result = Verdict.UNSTABLE_TWO_NEGATIVE
    else:
        witness["rule"] = "no instability witness within tolerances"
        result = Verdict.INCONCLUSIVE
    return StabilityReport(surf.summary(), form, trace, bound, body.centroid, masses, result, witness)
