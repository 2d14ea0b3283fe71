# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled recurrence kernels for the Elman cell (hot loop of train/predict).

Inner loops run over independent output units so the compiler can
vectorise them; a dot-product formulation would serialise on one sum.
"""

import numpy as np
from libc.math cimport tanh


def rnn_forward(const double[:, ::1] A, const double[:, ::1] Wh):
    cdef Py_ssize_t T = A.shape[0], H = A.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double hi
    out_arr = np.empty((T, H))
    cdef double[:, ::1] out = out_arr
    for t in range(T):
        for j in range(H):
            out[t, j] = A[t, j]
        if t > 0:
            for i in range(H):
                hi = out[t - 1, i]
                for j in range(H):
                    out[t, j] += hi * Wh[i, j]
        for j in range(H):
            out[t, j] = tanh(out[t, j])
    return out_arr


def rnn_backward(const double[:, ::1] Hs, const double[:, ::1] dHs, const double[:, ::1] Wh):
    cdef Py_ssize_t T = Hs.shape[0], H = Hs.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double h, d
    dA_arr = np.empty((T, H))
    dWh_arr = np.zeros((H, H))
    cdef double[:, ::1] dA = dA_arr
    cdef double[:, ::1] dWh = dWh_arr
    cdef double[:, ::1] WhT = np.ascontiguousarray(np.asarray(Wh).T)
    cdef double[::1] dh_next = np.zeros(H)
    for t in range(T - 1, -1, -1):
        for j in range(H):
            h = Hs[t, j]
            dA[t, j] = (dHs[t, j] + dh_next[j]) * (1.0 - h * h)
        if t > 0:
            for i in range(H):
                h = Hs[t - 1, i]
                for j in range(H):
                    dWh[i, j] += h * dA[t, j]
        # dh_next = Wh @ dA[t]
        for i in range(H):
            dh_next[i] = 0.0
        for j in range(H):
            d = dA[t, j]
            for i in range(H):
                dh_next[i] += WhT[j, i] * d
    return dA_arr, dWh_arr
