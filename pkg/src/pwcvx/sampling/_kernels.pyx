# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels for the sampling oracle.

Same signatures and results as ``_kernels_py``; selected at import time.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def polyhedron_mask(double[:, ::1] A, double[::1] b, double[:, ::1] Aeq,
                    double[::1] beq, double[:, ::1] X, double tol):
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1]
    cdef Py_ssize_t ni = A.shape[0], ne = Aeq.shape[0]
    cdef Py_ssize_t i, k, j
    cdef double s
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.ones(m, dtype=np.uint8)
    for i in range(m):
        for k in range(ni):
            s = 0.0
            for j in range(n):
                s += A[k, j] * X[i, j]
            if s > b[k] + tol:
                out[i] = 0
                break
        if out[i] == 0:
            continue
        for k in range(ne):
            s = 0.0
            for j in range(n):
                s += Aeq[k, j] * X[i, j]
            s -= beq[k]
            if s > tol or s < -tol:
                out[i] = 0
                break
    return out.astype(bool)


def quadratic_values(double[:, ::1] Q, double[::1] c, double gamma, double[:, ::1] X):
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, row
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    for i in range(m):
        acc = gamma
        for j in range(n):
            row = 0.0
            for k in range(n):
                row += Q[j, k] * X[i, k]
            acc += X[i, j] * (0.5 * row + c[j])
        out[i] = acc
    return out


def violation_indices(double[::1] fx, double[::1] fy, double[::1] fz, double t, double tol):
    """Indices ``i`` with finite ``fx, fy`` and ``fz > (1-t) fx + t fy + tol``."""
    cdef Py_ssize_t m = fx.shape[0], i, cnt = 0
    cdef double inf = np.inf
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.empty(m, dtype=np.int64)
    for i in range(m):
        if fx[i] == inf or fy[i] == inf:
            continue
        if fz[i] > (1.0 - t) * fx[i] + t * fy[i] + tol:
            idx[cnt] = i
            cnt += 1
    return idx[:cnt]
