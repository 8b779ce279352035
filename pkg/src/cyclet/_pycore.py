"""Pure-Python implementation of the numerical kernels.

Mirrors ``_core.pyx`` function for function; selected automatically when the
compiled extension is unavailable.  ``solve_batch`` is vectorised with numpy,
the other kernels are plain loops.
"""

import math

import numpy as np

KIND_POWER = 0
KIND_GAUSSIAN = 1
KIND_EXPONENTIAL = 2

STATUS_OK = 0
STATUS_NO_ROOT = 1
STATUS_NOT_CONVERGED = 2


def _rdw(kind, c1, c2, r):
    """r * W'(r) for the built-in potentials."""
    if kind == KIND_POWER:
        return c1 * c2 * r**c2
    y = r / c2
    if kind == KIND_GAUSSIAN:
        return 2.0 * c1 * y * y * math.exp(-y * y)
    return c1 * y * math.exp(-y)


def _w(kind, c1, c2, r):
    if kind == KIND_POWER:
        return c1 * r**c2
    y = r / c2
    if kind == KIND_GAUSSIAN:
        return -c1 * math.exp(-y * y)
    return -c1 * math.exp(-y)


def virial_residual(kind, A, B, c1, c2, qn, r):
    """p T'(p) - r W'(r) with p = qn / r."""
    return A * B * (qn / r) ** B - _rdw(kind, c1, c2, r)


def energy_per_particle(kind, A, B, c1, c2, qn, r):
    return A * (qn / r) ** B + _w(kind, c1, c2, r)


def scan_grid(r_lo, r_hi, n_scan):
    return np.exp(np.linspace(math.log(r_lo), math.log(r_hi), n_scan))


def _bisect(kind, A, B, c1, c2, qn, lo, hi, flo, rtol, maxit):
    for _ in range(maxit):
        if hi - lo <= rtol * 0.5 * (lo + hi):
            return 0.5 * (lo + hi), True
        mid = 0.5 * (lo + hi)
        fm = virial_residual(kind, A, B, c1, c2, qn, mid)
        if fm == 0.0:
            return mid, True
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo <= rtol * 0.5 * (lo + hi)


def scan_roots(kind, A, B, c1, c2, qn, r_lo, r_hi, n_scan, rtol, maxit):
    """All sign changes of the virial residual on a log grid, refined by bisection.

    Returns (roots, converged) as lists.
    """
    grid = scan_grid(r_lo, r_hi, n_scan)
    f = [virial_residual(kind, A, B, c1, c2, qn, float(r)) for r in grid]
    roots, ok = [], []
    for k in range(n_scan - 1):
        if f[k] == 0.0:
            roots.append(float(grid[k]))
            ok.append(True)
        elif f[k] * f[k + 1] < 0.0:
            r, c = _bisect(kind, A, B, c1, c2, qn, float(grid[k]), float(grid[k + 1]), f[k], rtol, maxit)
            roots.append(r)
            ok.append(c)
    if f[-1] == 0.0:
        roots.append(float(grid[-1]))
        ok.append(True)
    return roots, ok


def _rdw_vec(kind, c1, c2, r):
    if kind == KIND_POWER:
        return c1 * c2 * r**c2
    y = r / c2
    if kind == KIND_GAUSSIAN:
        return 2.0 * c1 * y * y * np.exp(-y * y)
    return c1 * y * np.exp(-y)


def _w_vec(kind, c1, c2, r):
    if kind == KIND_POWER:
        return c1 * r**c2
    y = r / c2
    if kind == KIND_GAUSSIAN:
        return -c1 * np.exp(-y * y)
    return -c1 * np.exp(-y)


def monotone_runs(rmb, rw):
    """Index ranges on which rw/rmb is monotone.

    Within one run the residual alpha*rmb - rw changes sign at most once
    (rmb > 0), so its bracket is located by binary search instead of a
    full scan.
    """
    t = np.asarray(rw) / np.asarray(rmb)
    d = np.sign(np.diff(t))
    bounds = [0]
    last = 0.0
    for k, dk in enumerate(d):
        if dk != 0.0 and last != 0.0 and dk != last:
            bounds.append(k)
        if dk != 0.0:
            last = dk
    bounds.append(len(t) - 1)
    return np.array(bounds, dtype=np.intp)


def _bisect_vec(kind, A, B, c1, c2, alpha, lo, hi, flo, rtol, maxit):
    # the residual keeps the sign of flo at lo throughout
    lo, hi = lo.copy(), hi.copy()
    neg = flo < 0.0
    done = hi - lo <= rtol * 0.5 * (lo + hi)
    for _ in range(maxit):
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        l, h = lo[act], hi[act]
        mid = 0.5 * (l + h)
        fm = alpha[act] / mid**B - _rdw_vec(kind, c1, c2, mid)
        exact = fm == 0.0
        same = (fm < 0.0) == neg[act]
        l = np.where(same | exact, mid, l)
        h = np.where(~same | exact, mid, h)
        lo[act] = l
        hi[act] = h
        done[act] = exact | (h - l <= rtol * 0.5 * (l + h))
    return 0.5 * (lo + hi), done


def solve_batch(kind, A, B, c1, c2, N, qn, r_lo, r_hi, n_scan, rtol, maxit, chunk=None):
    """Minimum-energy stationary point for every entry of ``qn``.

    Returns arrays (r0, E, status); E is the total energy N (T + W).
    Same monotone-run search as the compiled kernel, vectorised over Q.
    """
    qn = np.ascontiguousarray(qn, dtype=float)
    m = len(qn)
    r0 = np.full(m, np.nan)
    energy = np.full(m, np.inf)
    status = np.full(m, STATUS_NO_ROOT, dtype=np.int64)
    grid = scan_grid(r_lo, r_hi, n_scan)
    rmb = grid ** (-B)
    rw = _rdw_vec(kind, c1, c2, grid)
    bounds = monotone_runs(rmb, rw)
    alpha = A * B * qn**B
    for j in range(len(bounds) - 1):
        s, e = bounds[j], bounds[j + 1]
        fs = alpha * rmb[s] - rw[s]
        fe = alpha * rmb[e] - rw[e]
        at_s = (fs == 0.0) if j == 0 else np.zeros(m, dtype=bool)
        at_e = (fe == 0.0) & ~at_s
        inside = (fs * fe < 0.0) & ~at_s & ~at_e
        r = np.where(at_s, grid[s], grid[e])
        ok = np.ones(m, dtype=bool)
        idx = np.nonzero(inside)[0]
        if idx.size:
            a = alpha[idx]
            f_start = fs[idx]
            lo = np.full(idx.size, s, dtype=np.intp)
            hi = np.full(idx.size, e, dtype=np.intp)
            hit = np.zeros(idx.size, dtype=bool)
            while True:
                active = (hi - lo > 1) & ~hit
                if not active.any():
                    break
                mid = (lo + hi) // 2
                fm = a * rmb[mid] - rw[mid]
                zero = active & (fm == 0.0)
                lo = np.where(zero, mid, lo)
                hi = np.where(zero, mid, hi)
                hit |= zero
                same = (fm < 0.0) == (f_start < 0.0)
                lo = np.where(active & ~zero & same, mid, lo)
                hi = np.where(active & ~zero & ~same, mid, hi)
            refined, conv = _bisect_vec(
                kind, A, B, c1, c2, a, grid[lo], grid[hi], a * rmb[lo] - rw[lo], rtol, maxit
            )
            r[idx] = np.where(hit, grid[lo], refined)
            ok[idx] = hit | conv
        found = at_s | at_e | inside
        e_root = N * (A * (qn / r) ** B + _w_vec(kind, c1, c2, r))
        better = found & (e_root < energy)
        energy = np.where(better, e_root, energy)
        r0 = np.where(better, r, r0)
        status = np.where(better, np.where(ok, STATUS_OK, STATUS_NOT_CONVERGED), status)
    return r0, energy, status


def numerov(k2, h, u0, u1, ku0):
    """Integrate u'' = -k2(r) u outward with the Numerov recursion.

    ``ku0`` is the limit of k2*u at the first node, which stays finite for
    Coulomb-like or centrifugal singularities even when k2 itself does not.
    Returns (node count, u at last node, u at the node before).
    """
    c = h * h / 12.0
    n = len(k2)
    prev = u0 + c * ku0
    u_prev, u = u0, u1
    cur = 1.0 + c * k2[1]
    nodes = 0
    for i in range(1, n - 1):
        nxt = 1.0 + c * k2[i + 1]
        u_next = ((12.0 - 10.0 * cur) * u - prev) / nxt
        if (u_next < 0.0 < u) or (u < 0.0 < u_next):
            nodes += 1
        u_prev, u = u, u_next
        prev = cur * u_prev
        cur = nxt
        if abs(u) > 1e200:
            u *= 1e-200
            u_prev *= 1e-200
            prev *= 1e-200
    return nodes, u, u_prev
