"""Moebius maps of the unit ball and the conformal field they generate.

All functions broadcast over leading axes; the last axis holds the
ambient coordinates, so ``x`` may be a single point of shape ``(n+1,)``
or a batch of shape ``(..., n+1)``.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

_BALL_SLACK = 1e-12


def _dot(u, v):
    return np.sum(u * v, axis=-1)


def _as_points(a, x):
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if a.shape[-1] != x.shape[-1]:
        raise DomainError(f"dimension mismatch: {a.shape[-1]} vs {x.shape[-1]}")
    if x.shape[-1] < 3:
        raise DomainError("ambient dimension n+1 must be at least 3")
    if np.any(_dot(a, a) >= 1.0):
        raise DomainError("|a| must be < 1")
    if np.any(_dot(x, x) > (1.0 + _BALL_SLACK) ** 2):
        raise DomainError("|x| must be <= 1")
    return a, x


def _denominator(a, x):
    return 1.0 - 2.0 * _dot(a, x) + _dot(a, a) * _dot(x, x)


def mobius_map(a, x):
    """Conformal automorphism of the ball sending ``a`` to the origin.

    ``phi_a(x) = ((1-|a|^2) x - (1 - 2<a,x> + |x|^2) a) / (1 - 2<a,x> + |a|^2 |x|^2)``
    """
    a, x = _as_points(a, x)
    aa = _dot(a, a)[..., None]
    ax = _dot(a, x)[..., None]
    xx = _dot(x, x)[..., None]
    den = _denominator(a, x)[..., None]
    return ((1.0 - aa) * x - (1.0 - 2.0 * ax + xx) * a) / den


def conformal_factor(a, x):
    """Linear scale of ``d mobius_map(a, .)`` at ``x``."""
    a, x = _as_points(a, x)
    return (1.0 - _dot(a, a)) / _denominator(a, x)


def norm_identity_residual(a, x):
    """``|1 - |phi_a(x)|^2 - (1-|a|^2)(1-|x|^2)/den|``, elementwise."""
    y = mobius_map(a, x)
    a, x = _as_points(a, x)
    lhs = 1.0 - _dot(y, y)
    rhs = (1.0 - _dot(a, a)) * (1.0 - _dot(x, x)) / _denominator(a, x)
    return np.abs(lhs - rhs)


def flow(xi, t, x):
    """One-parameter family ``f_t = phi_{t xi}``; ``f_0`` is the identity."""
    if abs(t) >= 1.0:
        raise DomainError("flow parameter must satisfy |t| < 1")
    return mobius_map(t * np.asarray(xi, dtype=float), x)


def killing_field(xi, x):
    """Velocity of the flow at t = 0: ``-(1+|x|^2) xi + 2 <xi,x> x``.

    Tangent to the unit sphere wherever ``|x| = 1``.
    """
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    xx = _dot(x, x)[..., None]
    return -(1.0 + xx) * xi + 2.0 * _dot(xi, x)[..., None] * x


def field_divergence(xi, x):
    """Ambient divergence of ``killing_field(xi, .)``, equal to ``2(n+1)<xi,x>``."""
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    return 2.0 * x.shape[-1] * _dot(xi, x)


def test_function(xi, x, normal):
    """Normal component of the conformal field, ``<Y[xi], N>``."""
    return _dot(killing_field(xi, x), np.asarray(normal, dtype=float))


def test_function_dual(xi, x, normal):
    """Same quantity as :func:`test_function`, written as ``<xi, -(1+|x|^2)N + 2<x,N>x>``."""
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    normal = np.asarray(normal, dtype=float)
    xx = _dot(x, x)[..., None]
    xn = _dot(x, normal)[..., None]
    return _dot(xi, -(1.0 + xx) * normal + 2.0 * xn * x)


def jacobi_image(xi, x, normal, H, n):
    """Closed form of ``(Laplacian + |sigma|^2) test_function`` on a CMC hypersurface.

    Returns ``-2n <xi, N + H x>``.
    """
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    normal = np.asarray(normal, dtype=float)
    return -2.0 * n * _dot(xi, normal + H * x)


# keep pytest from collecting these when imported into test modules
test_function.__test__ = False
test_function_dual.__test__ = False
