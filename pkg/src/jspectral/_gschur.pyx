# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: generalized Schur elimination for shift-displacement generators.

Given a generator G and column signs s with
    Phi - Z Phi Z^H = G diag(s) G^H,      Z = lower shift,
produces L (lower triangular) and sigma (+-1 per column) with
    Phi = L diag(sigma) L^H
in O(m n^2) operations.  Same contract as the pure-python fallback in
``_gschur_py``; selected at import time by ``jspectral.displacement``.
"""

import numpy as np

cimport cython
from libc.math cimport sqrt


def gs_factor(gen, signs, double breakdown_tol=1e-13):
    """Run the elimination.

    Returns (L, sigma, status): status is -1 on success, else the step at
    which the hyperbolic pivot degenerated.  ``gen`` is not modified.
    """
    G = np.array(gen, dtype=np.complex128, order="C")
    s = np.ascontiguousarray(np.asarray(signs, dtype=np.float64))
    cdef Py_ssize_t n = G.shape[0]
    cdef Py_ssize_t m = G.shape[1]
    if s.shape[0] != m:
        raise ValueError("signs length must match generator columns")
    L = np.zeros((n, n), dtype=np.complex128)
    sigma = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t status = _factor(G, s, L, sigma, breakdown_tol, n, m)
    return L, sigma, int(status)


@cython.boundscheck(False)
@cython.wraparound(False)
cdef Py_ssize_t _factor(double complex[:, ::1] G,
                        double[::1] s,
                        double complex[:, ::1] L,
                        double[::1] sigma,
                        double breakdown_tol,
                        Py_ssize_t n,
                        Py_ssize_t m) nogil:
    cdef Py_ssize_t k, i, j, pp, pm, piv
    cdef double complex gp, gj, t
    cdef double r, a2, b2, best, mag, rho, ch, sh, delta, sg
    for k in range(n):
        # reduce each sign block of row k to its largest entry
        pp = -1
        pm = -1
        best = -1.0
        for j in range(m):
            if s[j] > 0:
                mag = _cabs2(G[k, j])
                if mag > best:
                    best = mag
                    pp = j
        best = -1.0
        for j in range(m):
            if s[j] < 0:
                mag = _cabs2(G[k, j])
                if mag > best:
                    best = mag
                    pm = j
        a2 = 0.0
        b2 = 0.0
        for j in range(m):
            if s[j] > 0:
                a2 += _cabs2(G[k, j])
            else:
                b2 += _cabs2(G[k, j])
        if a2 + b2 == 0.0 or _fabs(a2 - b2) <= breakdown_tol * (a2 + b2):
            return k

        if pp >= 0:
            _reduce_block(G, s, k, pp, 1.0, n, m)
        if pm >= 0:
            _reduce_block(G, s, k, pm, -1.0, n, m)

        delta = a2 - b2
        if delta > 0.0:
            piv = pp
            sg = 1.0
            if pm >= 0 and G[k, pm].real != 0.0:
                rho = G[k, pm].real / G[k, pp].real
                ch = 1.0 / sqrt(1.0 - rho * rho)
                sh = rho * ch
                for i in range(k, n):
                    gp = G[i, pp]
                    gj = G[i, pm]
                    G[i, pp] = ch * gp - sh * gj
                    G[i, pm] = ch * gj - sh * gp
        else:
            piv = pm
            sg = -1.0
            if pp >= 0 and G[k, pp].real != 0.0:
                rho = G[k, pp].real / G[k, pm].real
                ch = 1.0 / sqrt(1.0 - rho * rho)
                sh = rho * ch
                for i in range(k, n):
                    gp = G[i, pp]
                    gj = G[i, pm]
                    G[i, pm] = ch * gj - sh * gp
                    G[i, pp] = ch * gp - sh * gj
        sigma[k] = sg
        for i in range(k, n):
            L[i, k] = G[i, piv]
        # new generator: pivot column shifted down one row
        for i in range(n - 1, k, -1):
            G[i, piv] = G[i - 1, piv]
        G[k, piv] = 0.0
    return -1


cdef inline double _cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double _fabs(double x) nogil:
    return x if x >= 0.0 else -x


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _reduce_block(double complex[:, ::1] G,
                        double[::1] s,
                        Py_ssize_t k,
                        Py_ssize_t p,
                        double block_sign,
                        Py_ssize_t n,
                        Py_ssize_t m) nogil:
    """Unitary rotations inside one sign block: row-k mass onto column p, real >= 0."""
    cdef Py_ssize_t j, i
    cdef double complex gp, gj, phase, t1, t2
    cdef double r, mag
    for j in range(m):
        if j == p or (s[j] > 0) != (block_sign > 0):
            continue
        gj = G[k, j]
        if gj.real == 0.0 and gj.imag == 0.0:
            continue
        gp = G[k, p]
        r = sqrt(_cabs2(gp) + _cabs2(gj))
        for i in range(k, n):
            t1 = G[i, p]
            t2 = G[i, j]
            G[i, p] = (gp.conjugate() * t1 + gj.conjugate() * t2) / r
            G[i, j] = (gp * t2 - gj * t1) / r
    # make the pivot entry real nonnegative
    gp = G[k, p]
    mag = sqrt(_cabs2(gp))
    if mag > 0.0 and (gp.imag != 0.0 or gp.real < 0.0):
        phase = gp.conjugate() / mag
        for i in range(k, n):
            G[i, p] = G[i, p] * phase
