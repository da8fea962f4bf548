"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""
from __future__ import annotations

import numpy as np


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps the upper triangle row by row until the off-diagonal Frobenius
    norm drops below ``tol * max(1, ||A||_F)``.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    V : ndarray
        Orthonormal eigenvectors as columns, matching ``w``.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    m = A.shape[0]
    V = np.eye(m)
    scale = max(1.0, np.linalg.norm(A))

    def off(M):
        return np.linalg.norm(M - np.diag(np.diag(M)))

    for _ in range(max_sweeps):
        if off(A) <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff  # tau**2 would overflow
                else:
                    tau = diff / (2.0 * apq)
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                R = np.eye(m)
                R[p, p] = R[q, q] = c
                R[p, q] = s
                R[q, p] = -s
                A = R.T @ A @ R
                A[p, q] = A[q, p] = 0.0
                V = V @ R
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
