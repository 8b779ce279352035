"""Closed-form envelope results.

Homogeneous kinematics ``A p**B`` with a power-law pair potential ``C r**F``
give the energy in closed form; the massless string-like case reduces to a
Regge law E**2 proportional to Q.  For finite-range potentials ``-g w(r/a)``
the coupling at which a level reaches E = 0 follows from a single
dimensionless root y0 of ``y w'(y) + B w(y) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .kernel import Shape
from .oscillator import enumerate_levels

__all__ = [
    "CriticalCouplingResult",
    "power_law_energy",
    "glueball_energy",
    "glueball_regge_table",
    "critical_root",
    "critical_root_bisect",
    "critical_coupling",
    "critical_coupling_limit",
    "ground_state_critical_curve",
]


@dataclass(frozen=True)
class CriticalCouplingResult:
    y0: float
    g_c: float
    shape: Shape
    B: float
    N: int
    Q: float


def power_law_energy(A, B, C, F, N, Q):
    if not (A > 0 and B > 0):
        raise DomainError(f"need A > 0 and B > 0, got A={A}, B={B}")
    if not C * F > 0:
        raise DomainError(f"need C*F > 0, got C={C}, F={F}")
    if not B + F > 0:
        raise DomainError(f"B + F = {B + F} <= 0: the envelope energy has no minimum")
    if not Q > 0 or N < 2:
        raise DomainError(f"need Q > 0 and N >= 2, got Q={Q}, N={N}")
    s = B + F
    return N * C * (s / B) * (A * B / (C * F)) ** (F / s) * (Q / N) ** (B * F / s)


def glueball_energy(sigma, N, Q):
    """Massless particles tied by strings of tension sigma: E = 2 sqrt(N sigma Q)."""
    return 2.0 * math.sqrt(N * sigma * Q)


def glueball_regge_table(sigma, N, K):
    """Rows (Q, E, E**2, L) for the K lowest levels in D=3.

    The mean total length satisfies E = 2 sigma L.
    """
    if not sigma > 0:
        raise DomainError(f"string tension must be positive, got {sigma}")
    rows = []
    for level in enumerate_levels(N, 3, K):
        E = glueball_energy(sigma, N, level.Q)
        rows.append((level.Q, E, E * E, E / (2.0 * sigma)))
    return rows


def _y0_residual(shape, B, y):
    return y * shape.dw(y) + B * shape.w(y)


def critical_root(shape, B):
    """Positive root y0 of y w'(y) + B w(y) = 0 in closed form."""
    shape = Shape.parse(shape)
    if not B > 0:
        raise DomainError(f"kinetic exponent must be positive, got {B}")
    if shape is Shape.GAUSSIAN:
        return math.sqrt(0.5 * B)
    return float(B)


def critical_root_bisect(shape, B, tol=1e-13, max_iter=400):
    """Same root by bisection; independent of the closed forms above.

    y w' + B w is positive near 0 (it tends to B) and negative for large y
    for both built-in shapes, so an expanding bracket always exists.
    """
    shape = Shape.parse(shape)
    lo, hi = 0.0, 1.0
    while float(_y0_residual(shape, B, hi)) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise ConvergenceError(f"no sign change for y0 of {shape} with B={B}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * max(1.0, mid):
            return mid
        if float(_y0_residual(shape, B, mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"y0 bisection did not converge for {shape} with B={B}")


def critical_coupling(A, B, shape, N, Q, a=1.0):
    """Coupling g_c at which the level with global quantum number Q reaches E = 0."""
    if not (A > 0 and B > 0 and Q > 0 and a > 0):
        raise DomainError("need A, B, Q, a > 0")
    if N < 2:
        raise DomainError(f"need N >= 2, got {N}")
    shape = Shape.parse(shape)
    y0 = critical_root(shape, B)
    g_c = A / ((a * y0) ** B * float(shape.w(y0))) * (Q / N) ** B
    return CriticalCouplingResult(y0, g_c, shape, float(B), int(N), float(Q))


def critical_coupling_limit(A, B, shape, D, a=1.0):
    """Ground-state g_c for N -> infinity, where (D/N) cot(pi/2N) -> 2D/pi."""
    shape = Shape.parse(shape)
    y0 = critical_root(shape, B)
    return A / ((a * y0) ** B * float(shape.w(y0))) * (2.0 * D / math.pi) ** B


def ground_state_critical_curve(A, B, shape, D, N_list, a=1.0):
    """Rows (N, g_c) for the ground state, Q = D cot(pi / 2N)."""
    rows = []
    for N in N_list:
        Q = D / math.tan(math.pi / (2 * N))
        rows.append((int(N), critical_coupling(A, B, shape, N, Q, a).g_c))
    return rows
