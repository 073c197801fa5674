# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stencil kernels; mirrors kernels._numpy exactly (same stencils,
same edge handling). Single pass per operator, no temporaries."""

import numpy as np

cimport cython

LANE = "cython"


def d_x1(w_in, double h1):
    cdef double complex[:, ::1] w = w_in
    out_arr = np.empty_like(w_in)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t n1 = w.shape[0], n2 = w.shape[1]
    cdef Py_ssize_t i, k
    cdef double inv2h = 1.0 / (2.0 * h1)
    for k in range(n2):
        out[0, k] = (-3.0 * w[0, k] + 4.0 * w[1, k] - w[2, k]) * inv2h
        out[n1 - 1, k] = (3.0 * w[n1 - 1, k] - 4.0 * w[n1 - 2, k] + w[n1 - 3, k]) * inv2h
    for i in range(1, n1 - 1):
        for k in range(n2):
            out[i, k] = (w[i + 1, k] - w[i - 1, k]) * inv2h
    return out_arr


def d_rho(w_in, double h2):
    cdef double complex[:, ::1] w = w_in
    out_arr = np.empty_like(w_in)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t n1 = w.shape[0], n2 = w.shape[1]
    cdef Py_ssize_t i, k
    cdef double inv2h = 1.0 / (2.0 * h2)
    for i in range(n1):
        out[i, 0] = 0.0
        for k in range(1, n2 - 1):
            out[i, k] = (w[i, k + 1] - w[i, k - 1]) * inv2h
        out[i, n2 - 1] = (3.0 * w[i, n2 - 1] - 4.0 * w[i, n2 - 2] + w[i, n2 - 3]) * inv2h
    return out_arr


def d2_x1(w_in, double h1):
    cdef double complex[:, ::1] w = w_in
    out_arr = np.empty_like(w_in)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t n1 = w.shape[0], n2 = w.shape[1]
    cdef Py_ssize_t i, k
    cdef double invh2 = 1.0 / (h1 * h1)
    for k in range(n2):
        out[0, k] = (2.0 * w[0, k] - 5.0 * w[1, k] + 4.0 * w[2, k] - w[3, k]) * invh2
        out[n1 - 1, k] = (2.0 * w[n1 - 1, k] - 5.0 * w[n1 - 2, k]
                          + 4.0 * w[n1 - 3, k] - w[n1 - 4, k]) * invh2
    for i in range(1, n1 - 1):
        for k in range(n2):
            out[i, k] = (w[i + 1, k] - 2.0 * w[i, k] + w[i - 1, k]) * invh2
    return out_arr


def lap_rho(w_in, double h2, int dim_N, face_pow_in, node_pow_in):
    cdef double complex[:, ::1] w = w_in
    cdef double[::1] face_pow = face_pow_in
    cdef double[::1] node_pow = node_pow_in
    out_arr = np.empty_like(w_in)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t n1 = w.shape[0], n2 = w.shape[1]
    cdef Py_ssize_t i, k
    cdef double invh2 = 1.0 / (h2 * h2)
    cdef double axis_coef = 2.0 * (dim_N - 1) * invh2
    cdef double rho_edge = (n2 - 1) * h2
    cdef double edge_coef = (dim_N - 2) / rho_edge
    cdef double inv2h = 1.0 / (2.0 * h2)
    cdef double complex flux_lo, flux_hi, d1, d2
    for i in range(n1):
        out[i, 0] = axis_coef * (w[i, 1] - w[i, 0])
        for k in range(1, n2 - 1):
            flux_lo = face_pow[k - 1] * (w[i, k] - w[i, k - 1])
            flux_hi = face_pow[k] * (w[i, k + 1] - w[i, k])
            out[i, k] = (flux_hi - flux_lo) * invh2 / node_pow[k]
        d2 = (2.0 * w[i, n2 - 1] - 5.0 * w[i, n2 - 2]
              + 4.0 * w[i, n2 - 3] - w[i, n2 - 4]) * invh2
        d1 = (3.0 * w[i, n2 - 1] - 4.0 * w[i, n2 - 2] + w[i, n2 - 3]) * inv2h
        out[i, n2 - 1] = d2 + edge_coef * d1
    return out_arr
