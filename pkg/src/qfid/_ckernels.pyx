# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; see ``_pykernels`` for the reference twin."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, M_PI

cnp.import_array()

BACKEND = "cython"


def mc_values(rot, m, t, uniforms):
    cdef const double[:, ::1] R = np.ascontiguousarray(rot, dtype=np.float64)
    cdef const double[:, ::1] M = np.ascontiguousarray(m, dtype=np.float64)
    cdef const double[::1] T = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[:, ::1] U = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = U.shape[0], i, k
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double z, phi, s, x, y, w, a, dot
    with nogil:
        for i in range(n):
            z = 2.0 * U[i, 0] - 1.0
            phi = 2.0 * M_PI * U[i, 1]
            w = 1.0 - z * z
            s = sqrt(w) if w > 0.0 else 0.0
            x = s * cos(phi)
            y = s * sin(phi)
            dot = 0.0
            for k in range(3):
                w = R[k, 0] * x + R[k, 1] * y + R[k, 2] * z
                a = M[k, 0] * x + M[k, 1] * y + M[k, 2] * z + T[k]
                dot = dot + w * a
            o[i] = 0.5 * (1.0 + dot)
    return out


def pairwise_sum(values):
    buf = np.array(values, dtype=np.float64)
    cdef double[::1] b = buf
    cdef Py_ssize_t n = b.shape[0], h, i
    if n == 0:
        return 0.0
    with nogil:
        while n > 1:
            h = n // 2
            for i in range(h):
                b[i] = b[2 * i] + b[2 * i + 1]
            if n % 2:
                b[h] = b[n - 1]
                n = h + 1
            else:
                n = h
    return b[0]
