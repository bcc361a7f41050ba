"""numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def polyhedron_mask(A, b, Aeq, beq, X, tol):
    ok = np.ones(X.shape[0], dtype=bool)
    if A.shape[0]:
        ok &= np.all(X @ A.T <= b + tol, axis=1)
    if Aeq.shape[0]:
        ok &= np.all(np.abs(X @ Aeq.T - beq) <= tol, axis=1)
    return ok


def quadratic_values(Q, c, gamma, X):
    return 0.5 * np.einsum("ij,jk,ik->i", X, Q, X) + X @ c + gamma


def violation_indices(fx, fy, fz, t, tol):
    finite = np.isfinite(fx) & np.isfinite(fy)
    with np.errstate(invalid="ignore"):
        bad = finite & (fz > (1.0 - t) * fx + t * fy + tol)
    return np.flatnonzero(bad).astype(np.int64)
