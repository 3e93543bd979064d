# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Semantics are defined by the numpy reference in ``_pykernels``; this module
must return bit-identical floats (same enumeration order, k-ascending
accumulation from 0.0, ``rint`` rounding, squared-distance comparisons with
one final ``sqrt``).  tests/test_kernels.py enforces the contract.
"""

from libc.math cimport INFINITY, rint, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def labeled_min_sq_dist(points, labels):
    """Min squared distance over differently-labeled pairs (pre-sorted input)."""
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.int64_t[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double best = INFINITY
    cdef double dx, s
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                dx = pts[j, 0] - pts[i, 0]
                if dx * dx >= best:
                    break
                if lab[j] == lab[i]:
                    continue
                s = dx * dx
                for k in range(1, d):
                    dx = pts[j, k] - pts[i, k]
                    s = s + dx * dx
                if s < best:
                    best = s
    return float(best)


def linforms_min_real(X, N, hybrid):
    """Exhaustive linear-forms search over q in {-N..N}^m \\ {0}; see fallback."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t m = Xv.shape[0]
    cdef Py_ssize_t n = Xv.shape[1]
    cdef int Nv = int(N)
    cdef bint hyb = bool(hybrid)
    cdef Py_ssize_t base = 2 * Nv + 1
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t t, rem, k, i, cc
    for k in range(m):
        total *= base
    q_arr = np.zeros(m, dtype=np.int64)
    F_arr = np.zeros(n, dtype=np.float64)
    bq_arr = np.zeros(m, dtype=np.int64)
    bp_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] q = q_arr
    cdef double[::1] F = F_arr
    cdef cnp.int64_t[::1] bq = bq_arr
    cdef double[::1] bp = bp_arr
    cdef double best = INFINITY
    cdef double s, fmin, fmax, c, cand, e, ec, diff, pwin
    cdef bint allzero
    with nogil:
        for t in range(total):
            rem = t
            for k in range(m - 1, -1, -1):
                q[k] = rem % base - Nv
                rem = rem // base
            allzero = True
            for k in range(m):
                if q[k] != 0:
                    allzero = False
                    break
            if allzero:
                continue
            for i in range(n):
                s = 0.0
                for k in range(m):
                    s = s + q[k] * Xv[k, i]
                F[i] = s
            if hyb:
                fmin = F[0]
                fmax = F[0]
                for i in range(1, n):
                    if F[i] < fmin:
                        fmin = F[i]
                    if F[i] > fmax:
                        fmax = F[i]
                c = rint(0.5 * (fmin + fmax))
                e = INFINITY
                pwin = c
                for cc in range(3):
                    cand = c + (cc - 1.0)
                    ec = 0.0
                    for i in range(n):
                        diff = F[i] - cand
                        if diff < 0.0:
                            diff = -diff
                        if diff > ec:
                            ec = diff
                    if ec < e:
                        e = ec
                        pwin = cand
            else:
                e = 0.0
                for i in range(n):
                    diff = F[i] - rint(F[i])
                    if diff < 0.0:
                        diff = -diff
                    if diff > e:
                        e = diff
            if e < best:
                best = e
                for k in range(m):
                    bq[k] = q[k]
                if hyb:
                    for i in range(n):
                        bp[i] = pwin
                else:
                    for i in range(n):
                        bp[i] = rint(F[i])
    return float(best), bq_arr.copy(), bp_arr.astype(np.int64)


def linforms_min_complex(Xre, Xim, disc, hybrid):
    """Complex linear-forms search over Gaussian-integer q; see fallback."""
    cdef double[:, ::1] Xr = np.ascontiguousarray(Xre, dtype=np.float64)
    cdef double[:, ::1] Xi = np.ascontiguousarray(Xim, dtype=np.float64)
    cdef cnp.int64_t[:, ::1] dv = np.ascontiguousarray(disc, dtype=np.int64)
    cdef Py_ssize_t m = Xr.shape[0]
    cdef Py_ssize_t n = Xr.shape[1]
    cdef Py_ssize_t nd = dv.shape[0]
    cdef bint hyb = bool(hybrid)
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t t, rem, k, i, row
    for k in range(m):
        total *= nd
    dig_arr = np.zeros(m, dtype=np.int64)
    Fre_arr = np.zeros(n, dtype=np.float64)
    Fim_arr = np.zeros(n, dtype=np.float64)
    bq_arr = np.zeros((m, 2), dtype=np.int64)
    bp_arr = np.zeros((n, 2), dtype=np.float64)
    cdef cnp.int64_t[::1] dig = dig_arr
    cdef double[::1] Fre = Fre_arr
    cdef double[::1] Fim = Fim_arr
    cdef cnp.int64_t[:, ::1] bq = bq_arr
    cdef double[:, ::1] bp = bp_arr
    cdef double best = INFINITY
    cdef double a, b, sre, sim, cr, ci, candr, candi, dre, dim, v, ec, e2
    cdef double fminre, fmaxre, fminim, fmaxim, pr, pi
    cdef Py_ssize_t dr, di
    cdef bint allzero
    with nogil:
        for t in range(total):
            rem = t
            allzero = True
            for k in range(m - 1, -1, -1):
                row = rem % nd
                rem = rem // nd
                dig[k] = row
                if dv[row, 0] != 0 or dv[row, 1] != 0:
                    allzero = False
            if allzero:
                continue
            for i in range(n):
                sre = 0.0
                sim = 0.0
                for k in range(m):
                    a = dv[dig[k], 0]
                    b = dv[dig[k], 1]
                    sre = sre + (a * Xr[k, i] - b * Xi[k, i])
                    sim = sim + (a * Xi[k, i] + b * Xr[k, i])
                Fre[i] = sre
                Fim[i] = sim
            if hyb:
                fminre = Fre[0]
                fmaxre = Fre[0]
                fminim = Fim[0]
                fmaxim = Fim[0]
                for i in range(1, n):
                    if Fre[i] < fminre:
                        fminre = Fre[i]
                    if Fre[i] > fmaxre:
                        fmaxre = Fre[i]
                    if Fim[i] < fminim:
                        fminim = Fim[i]
                    if Fim[i] > fmaxim:
                        fmaxim = Fim[i]
                cr = rint(0.5 * (fminre + fmaxre))
                ci = rint(0.5 * (fminim + fmaxim))
                e2 = INFINITY
                pr = cr
                pi = ci
                for dr in range(-1, 2):
                    for di in range(-1, 2):
                        candr = cr + dr
                        candi = ci + di
                        ec = 0.0
                        for i in range(n):
                            dre = Fre[i] - candr
                            dim = Fim[i] - candi
                            v = dre * dre + dim * dim
                            if v > ec:
                                ec = v
                        if ec < e2:
                            e2 = ec
                            pr = candr
                            pi = candi
            else:
                e2 = 0.0
                for i in range(n):
                    dre = Fre[i] - rint(Fre[i])
                    dim = Fim[i] - rint(Fim[i])
                    v = dre * dre + dim * dim
                    if v > e2:
                        e2 = v
            if e2 < best:
                best = e2
                for k in range(m):
                    bq[k, 0] = dv[dig[k], 0]
                    bq[k, 1] = dv[dig[k], 1]
                if hyb:
                    for i in range(n):
                        bp[i, 0] = pr
                        bp[i, 1] = pi
                else:
                    for i in range(n):
                        bp[i, 0] = rint(Fre[i])
                        bp[i, 1] = rint(Fim[i])
    return float(sqrt(best)), bq_arr.copy(), bp_arr.astype(np.int64)
