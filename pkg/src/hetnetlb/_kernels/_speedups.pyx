# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see _numpy.py for the reference)."""

import numpy as np

from libc.math cimport log2


def rate_matrix(const double[::1] p, const double[:, ::1] gains, double noise_w):
    cdef Py_ssize_t n_bs = gains.shape[0]
    cdef Py_ssize_t n_users = gains.shape[1]
    out_arr = np.empty((n_bs, n_users), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t n, k
    cdef double total, sig, interf
    for k in range(n_users):
        total = 0.0
        for n in range(n_bs):
            total += p[n] * gains[n, k]
        for n in range(n_bs):
            sig = p[n] * gains[n, k]
            interf = total - sig
            if interf < 0.0:
                interf = 0.0
            out[n, k] = log2(1.0 + sig / (interf + noise_w))
    return out_arr


def hbar_all(const double[::1] p, const double[:, ::1] eta, const double[:, ::1] gains,
             double noise_w):
    cdef Py_ssize_t n_bs = gains.shape[0]
    cdef Py_ssize_t n_users = gains.shape[1]
    shares_arr = np.empty((n_bs, n_users), dtype=np.float64)
    cdef double[:, ::1] shares = shares_arr
    colsum_arr = np.zeros(n_users, dtype=np.float64)
    cdef double[::1] colsum = colsum_arr
    out_arr = np.zeros(n_bs, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n, k, m
    cdef double total, sig, interf, share, acc
    for k in range(n_users):
        total = 0.0
        for n in range(n_bs):
            total += p[n] * gains[n, k]
        for n in range(n_bs):
            sig = p[n] * gains[n, k]
            interf = total - sig
            if interf < 0.0:
                interf = 0.0
            share = eta[n, k] / (interf + noise_w)
            shares[n, k] = share
            colsum[k] += share
    for m in range(n_bs):
        acc = 0.0
        for k in range(n_users):
            acc += gains[m, k] * (colsum[k] - shares[m, k])
        out[m] = acc
    return out_arr
