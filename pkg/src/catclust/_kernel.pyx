# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the hot per-object competitive pass.

Semantics must stay bit-identical to catclust/_kernel_py.py; the pure
Python module is the readable reference, this one exists for speed.
"""

from libc.math cimport exp
from libc.stdlib cimport malloc, free

cimport numpy as cnp

import numpy as np

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64

BACKEND_NAME = "compiled"


def sigmoid_weight(double delta):
    return 1.0 / (1.0 + exp(-10.0 * delta + 5.0))


def run_pass(i32[:, ::1] X, i32[::1] labels,
             i64[:, :, ::1] counts, i64[:, ::1] nn,
             i64[::1] members, i64[::1] g, long long g_total,
             double[::1] rho, double[::1] delta, double[::1] u,
             double[:, ::1] omega, double eta, double scale,
             bint competition, bint penalty, bint live_rho):
    """One full pass of online winner/rival competition over all objects.

    With live_rho the winning ratio is recomputed per object from the
    accumulating win counts g; otherwise the frozen per-pass ratios in
    `rho` are used. Mutates labels, counts, nn, members, g, delta and u
    in place. Returns (changed, g_total).
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k = counts.shape[0]
    cdef Py_ssize_t i, r, l
    cdef i32 c
    cdef int v, h, old
    cdef i64 nnv
    cdef double sl, rho_l, best, best_h
    cdef long long changed = 0

    cdef double* s = <double*> malloc(k * sizeof(double))
    cdef double* score = <double*> malloc(k * sizeof(double))
    if s == NULL or score == NULL:
        free(s)
        free(score)
        raise MemoryError()

    try:
        for i in range(n):
            for l in range(k):
                sl = 0.0
                for r in range(d):
                    c = X[i, r]
                    if c < 0:
                        continue
                    nnv = nn[l, r]
                    if nnv == 0:
                        continue
                    sl += omega[l, r] * counts[l, r, c] / nnv
                sl *= scale
                s[l] = sl
                if competition:
                    if live_rho:
                        if g_total > 0:
                            rho_l = <double> g[l] / <double> g_total
                        else:
                            rho_l = 0.0
                    else:
                        rho_l = rho[l]
                    score[l] = (1.0 - rho_l) * u[l] * sl
                else:
                    score[l] = sl

            v = 0
            best = score[0]
            for l in range(1, k):
                if score[l] > best:
                    best = score[l]
                    v = <int> l
            h = -1
            best_h = -1.0
            for l in range(k):
                if l != v and score[l] > best_h:
                    best_h = score[l]
                    h = <int> l

            old = labels[i]
            if old != v:
                if old >= 0:
                    members[old] -= 1
                    for r in range(d):
                        c = X[i, r]
                        if c >= 0:
                            counts[old, r, c] -= 1
                            nn[old, r] -= 1
                members[v] += 1
                for r in range(d):
                    c = X[i, r]
                    if c >= 0:
                        counts[v, r, c] += 1
                        nn[v, r] += 1
                labels[i] = v
                changed += 1

            if competition:
                g[v] += 1
                g_total += 1
                delta[v] = delta[v] + eta
                u[v] = 1.0 / (1.0 + exp(-10.0 * delta[v] + 5.0))
                if penalty and h >= 0:
                    delta[h] = delta[h] - eta * s[h]
                    u[h] = 1.0 / (1.0 + exp(-10.0 * delta[h] + 5.0))
    finally:
        free(s)
        free(score)

    return int(changed), g_total
