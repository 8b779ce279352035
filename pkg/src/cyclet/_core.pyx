# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels; same interface as ``_pycore``."""

import numpy as np
from ._pycore import monotone_runs
cimport numpy as cnp
from libc.math cimport exp, log, pow, floor, fabs

cnp.import_array()

cdef enum:
    KIND_POWER = 0
    KIND_GAUSSIAN = 1
    KIND_EXPONENTIAL = 2

cdef enum:
    ST_OK = 0
    ST_NO_ROOT = 1
    ST_NOT_CONVERGED = 2

STATUS_OK = ST_OK
STATUS_NO_ROOT = ST_NO_ROOT
STATUS_NOT_CONVERGED = ST_NOT_CONVERGED


cdef struct Params:
    int kind
    double A, B, c1, c2
    int b_int, f_int
    int ib, jf


cdef inline double ipow(double x, int n) nogil:
    cdef double r = 1.0
    cdef int k = n if n >= 0 else -n
    while k:
        if k & 1:
            r *= x
        x *= x
        k >>= 1
    return r if n >= 0 else 1.0 / r


cdef inline double fpow(double x, double e, int is_int, int ie) nogil:
    if is_int:
        return ipow(x, ie)
    return pow(x, e)


cdef Params make_params(int kind, double A, double B, double c1, double c2):
    cdef Params p
    p.kind = kind
    p.A = A
    p.B = B
    p.c1 = c1
    p.c2 = c2
    p.b_int = B == floor(B) and fabs(B) <= 16
    p.ib = <int>B
    p.f_int = kind == KIND_POWER and c2 == floor(c2) and fabs(c2) <= 16
    p.jf = <int>c2 if p.f_int else 0
    return p


cdef inline double rdw(Params* p, double r) nogil:
    cdef double y
    if p.kind == KIND_POWER:
        return p.c1 * p.c2 * fpow(r, p.c2, p.f_int, p.jf)
    y = r / p.c2
    if p.kind == KIND_GAUSSIAN:
        return 2.0 * p.c1 * y * y * exp(-y * y)
    return p.c1 * y * exp(-y)


cdef inline double wpot(Params* p, double r) nogil:
    cdef double y
    if p.kind == KIND_POWER:
        return p.c1 * fpow(r, p.c2, p.f_int, p.jf)
    y = r / p.c2
    if p.kind == KIND_GAUSSIAN:
        return -p.c1 * exp(-y * y)
    return -p.c1 * exp(-y)


cdef inline double residual(Params* p, double alpha, double r) nogil:
    # alpha = A B qn^B
    return alpha * fpow(r, -p.B, p.b_int, -p.ib) - rdw(p, r)


cdef inline double energy_pp(Params* p, double qn, double r) nogil:
    return p.A * fpow(qn / r, p.B, p.b_int, p.ib) + wpot(p, r)


cdef double bisect(Params* p, double alpha, double lo, double hi, double flo,
                   double rtol, int maxit, int* ok) nogil:
    cdef double mid, fm
    cdef int it
    for it in range(maxit):
        if hi - lo <= rtol * 0.5 * (lo + hi):
            ok[0] = 1
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        fm = residual(p, alpha, mid)
        if fm == 0.0:
            ok[0] = 1
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    ok[0] = hi - lo <= rtol * 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


def scan_grid(double r_lo, double r_hi, int n_scan):
    return np.exp(np.linspace(log(r_lo), log(r_hi), n_scan))


def virial_residual(int kind, double A, double B, double c1, double c2, double qn, double r):
    cdef Params p = make_params(kind, A, B, c1, c2)
    return residual(&p, A * B * pow(qn, B), r)


def energy_per_particle(int kind, double A, double B, double c1, double c2, double qn, double r):
    cdef Params p = make_params(kind, A, B, c1, c2)
    return energy_pp(&p, qn, r)


def scan_roots(int kind, double A, double B, double c1, double c2, double qn,
               double r_lo, double r_hi, int n_scan, double rtol, int maxit):
    cdef Params p = make_params(kind, A, B, c1, c2)
    cdef double[::1] grid = scan_grid(r_lo, r_hi, n_scan)
    cdef double alpha = A * B * pow(qn, B)
    cdef double[::1] f = np.empty(n_scan)
    cdef int k, ok = 0
    cdef double r
    for k in range(n_scan):
        f[k] = residual(&p, alpha, grid[k])
    roots, flags = [], []
    for k in range(n_scan - 1):
        if f[k] == 0.0:
            roots.append(grid[k])
            flags.append(True)
        elif f[k] * f[k + 1] < 0.0:
            r = bisect(&p, alpha, grid[k], grid[k + 1], f[k], rtol, maxit, &ok)
            roots.append(r)
            flags.append(bool(ok))
    if f[n_scan - 1] == 0.0:
        roots.append(grid[n_scan - 1])
        flags.append(True)
    return roots, flags


cdef inline double fsc(double alpha, double[::1] rmb, double[::1] rw, Py_ssize_t k) nogil:
    return alpha * rmb[k] - rw[k]


def solve_batch(int kind, double A, double B, double c1, double c2, double N, qn,
                double r_lo, double r_hi, int n_scan, double rtol, int maxit, chunk=None):
    cdef Params p = make_params(kind, A, B, c1, c2)
    cdef double[::1] q = np.ascontiguousarray(qn, dtype=np.float64)
    cdef Py_ssize_t m = q.shape[0], i, j, s, e, lo, hi, mid
    cdef double[::1] grid = scan_grid(r_lo, r_hi, n_scan)
    rmb_arr = np.empty(n_scan)
    rw_arr = np.empty(n_scan)
    cdef double[::1] rmb = rmb_arr
    cdef double[::1] rw = rw_arr
    r0_arr = np.full(m, np.nan)
    e_arr = np.full(m, np.inf)
    st_arr = np.full(m, ST_NO_ROOT, dtype=np.int64)
    cdef double[::1] r0 = r0_arr
    cdef double[::1] en = e_arr
    cdef long long[::1] st = st_arr
    cdef int k, ok, found
    cdef double alpha, fs, fe, fm, r, en_i
    for k in range(n_scan):
        rmb[k] = fpow(grid[k], -B, p.b_int, -p.ib)
        rw[k] = rdw(&p, grid[k])
    cdef Py_ssize_t[::1] bounds = monotone_runs(rmb_arr, rw_arr)
    cdef Py_ssize_t nb = bounds.shape[0]
    with nogil:
        for i in range(m):
            alpha = A * B * fpow(q[i], B, p.b_int, p.ib)
            for j in range(nb - 1):
                s = bounds[j]
                e = bounds[j + 1]
                fs = fsc(alpha, rmb, rw, s)
                fe = fsc(alpha, rmb, rw, e)
                found = 0
                if j == 0 and fs == 0.0:
                    r = grid[s]
                    ok = 1
                    found = 1
                elif fe == 0.0:
                    r = grid[e]
                    ok = 1
                    found = 1
                elif fs * fe < 0.0:
                    lo = s
                    hi = e
                    while hi - lo > 1:
                        mid = (lo + hi) // 2
                        fm = fsc(alpha, rmb, rw, mid)
                        if fm == 0.0:
                            lo = mid
                            hi = mid
                            break
                        if (fm < 0.0) == (fs < 0.0):
                            lo = mid
                        else:
                            hi = mid
                    if lo == hi:
                        r = grid[lo]
                        ok = 1
                    else:
                        r = bisect(&p, alpha, grid[lo], grid[hi], fsc(alpha, rmb, rw, lo), rtol, maxit, &ok)
                    found = 1
                if found:
                    en_i = N * energy_pp(&p, q[i], r)
                    if en_i < en[i]:
                        en[i] = en_i
                        r0[i] = r
                        st[i] = ST_OK if ok else ST_NOT_CONVERGED
    return r0_arr, e_arr, st_arr


def numerov(k2, double h, double u0, double u1, double ku0):
    cdef double[::1] kk = np.ascontiguousarray(k2, dtype=np.float64)
    cdef Py_ssize_t n = kk.shape[0], i
    cdef double c = h * h / 12.0
    cdef double prev = u0 + c * ku0
    cdef double u_prev = u0, u = u1, u_next
    cdef double cur = 1.0 + c * kk[1], nxt
    cdef long nodes = 0
    with nogil:
        for i in range(1, n - 1):
            nxt = 1.0 + c * kk[i + 1]
            u_next = ((12.0 - 10.0 * cur) * u - prev) / nxt
            if (u_next < 0.0 and u > 0.0) or (u < 0.0 and u_next > 0.0):
                nodes += 1
            u_prev = u
            u = u_next
            prev = cur * u_prev
            cur = nxt
            if fabs(u) > 1e200:
                u *= 1e-200
                u_prev *= 1e-200
                prev *= 1e-200
    return nodes, u, u_prev
