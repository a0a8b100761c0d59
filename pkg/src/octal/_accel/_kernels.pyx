# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels for message passing: edge-indexed scatter-add and
segment reduction.  octal._accel picks these up when built and silently falls
back to the numpy implementations otherwise."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def edge_aggregate(
    const double[:, ::1] h,
    const cnp.int64_t[::1] src,
    const cnp.int64_t[::1] dst,
    coef,
    double[:, ::1] out,
):
    """out[dst[e]] += coef[e] * h[src[e]] for every edge e (coef None means 1)."""
    cdef Py_ssize_t n_edges = src.shape[0]
    cdef Py_ssize_t dim = h.shape[1]
    cdef Py_ssize_t e, j, s, d
    cdef double c
    cdef const double[::1] coef_view
    if coef is None:
        for e in range(n_edges):
            s = src[e]
            d = dst[e]
            for j in range(dim):
                out[d, j] += h[s, j]
    else:
        coef_view = coef
        for e in range(n_edges):
            s = src[e]
            d = dst[e]
            c = coef_view[e]
            for j in range(dim):
                out[d, j] += c * h[s, j]
    return np.asarray(out)


def segment_sum(
    const double[:, ::1] h,
    const cnp.int64_t[::1] seg,
    double[:, ::1] out,
):
    """out[seg[i]] += h[i] rowwise; seg need not be sorted."""
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t dim = h.shape[1]
    cdef Py_ssize_t i, j, g
    for i in range(n):
        g = seg[i]
        for j in range(dim):
            out[g, j] += h[i, j]
    return np.asarray(out)
