"""Envelope-theory levels of cyclic N-body systems.

With ``p0 = Q / (N r0)`` the envelope conditions collapse to one equation in
the mean neighbour distance,

    f(r0) = p0 T'(p0) - r0 W'(r0) = 0,

and the level is ``E = N (T(p0) + W(r0))``.  Since ``dE/dr0 = -N f / r0``
the roots of ``f`` are the stationary points of E; the lowest one is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ConvergenceError, DomainError, NoBoundState
from .kernel import variational_character
from .oscillator import QuantumNumbers, mode_coefficients, sinpi

__all__ = [
    "ETSolution",
    "global_quantum_number",
    "ground_state_Q",
    "solve",
    "solve_many",
    "size_parameters",
    "asymptotic_scaling_check",
    "natural_length",
]

N_SCAN = 256
SCAN_LO = 1e-8
SCAN_HI = 1e8
RTOL = 1e-13
MAX_ITER = 200


@dataclass(frozen=True)
class ETSolution:
    E: float
    p0: float
    r0: float
    L: float
    Q: float
    N: int
    gamma: tuple
    character: object
    residual_virial: float
    residual_product: float
    all_roots: tuple

    def as_dict(self):
        return {
            "N": self.N,
            "Q": self.Q,
            "E": self.E,
            "p0": self.p0,
            "r0": self.r0,
            "L": self.L,
            "gamma": list(self.gamma),
            "character": str(self.character),
        }


def global_quantum_number(q: QuantumNumbers) -> float:
    c = mode_coefficients(q.N)
    return math.fsum(ci * (v + 0.5 * q.D) for ci, v in zip(c, q.nu))


def ground_state_Q(N, D) -> float:
    if N < 2 or D < 1:
        raise DomainError(f"need N >= 2 and D >= 1, got N={N}, D={D}")
    return D / math.tan(math.pi / (2 * N))


def natural_length(kin, pot):
    """Length unit that makes the root scan window scale-free."""
    return pot.length_scale(kin)


def _check(N, Q):
    if int(N) != N or N < 2:
        raise DomainError(f"particle number must be an integer >= 2, got {N}")
    if not Q > 0:
        raise DomainError(f"global quantum number must be positive, got {Q}")


def _gamma(Q, N, r0):
    return tuple(math.sqrt(2.0 * Q / N * sinpi(i, N)) / r0 for i in range(1, N))


def solve(kin, pot, N, Q, core=None) -> ETSolution:
    """Envelope-theory approximation of the level with global quantum number Q.

    Raises ``NoBoundState`` when the virial residual has no sign change on the
    scan window, or when a finite-range potential gives E >= 0, and
    ``ConvergenceError`` when a bracket cannot be refined within the
    iteration cap.
    """
    _check(N, Q)
    N = int(N)
    core = core or _backend.core
    kind, c1, c2 = pot.kernel_params()
    A, B = kin.A, kin.B
    qn = Q / N
    scale = natural_length(kin, pot)
    lo, hi = SCAN_LO * scale, SCAN_HI * scale
    roots, ok = core.scan_roots(kind, A, B, c1, c2, qn, lo, hi, N_SCAN, RTOL, MAX_ITER)
    if not roots:
        grid = core.scan_grid(lo, hi, N_SCAN)
        best = min(N * core.energy_per_particle(kind, A, B, c1, c2, qn, float(r)) for r in grid)
        raise NoBoundState(
            f"no stationary point of the envelope energy for N={N}, Q={Q:g}",
            best_E=best,
            diagnostics={"scan": [lo, hi, N_SCAN]},
        )
    if not all(ok):
        raise ConvergenceError(
            f"bisection did not reach rel. {RTOL:g} in {MAX_ITER} iterations",
            diagnostics={"roots": roots, "converged": ok},
        )
    energies = [N * core.energy_per_particle(kind, A, B, c1, c2, qn, r) for r in roots]
    best = int(np.argmin(energies))
    r0, E = roots[best], energies[best]
    all_roots = tuple(zip(roots, energies))
    if pot.finite_range and E >= 0.0:
        raise NoBoundState(
            f"envelope energy {E:g} is not negative: level unbound",
            best_E=E,
            diagnostics={"roots": [list(x) for x in all_roots]},
        )
    p0 = qn / r0
    return ETSolution(
        E=float(E),
        p0=float(p0),
        r0=float(r0),
        L=N * float(r0),
        Q=float(Q),
        N=N,
        gamma=_gamma(Q, N, r0),
        character=variational_character(kin, pot),
        residual_virial=abs(float(p0 * kin.dT(p0) - r0 * pot.dW(r0))),
        residual_product=abs(r0 * p0 - qn),
        all_roots=all_roots,
    )


def solve_many(kin, pot, N, Qs, core=None):
    """Vectorised ``solve`` over many Q at fixed N.

    Same scan window, tolerance and minimum-energy root rule as ``solve``,
    but only (E, r0, status) arrays are returned; status 0 is success,
    1 no root, 2 bisection not converged, 3 finite-range level unbound.
    """
    N = int(N)
    Qs = np.asarray(Qs, dtype=float)
    if N < 2 or np.any(Qs <= 0):
        raise DomainError("need N >= 2 and every Q > 0")
    core = core or _backend.core
    kind, c1, c2 = pot.kernel_params()
    scale = natural_length(kin, pot)
    r0, E, status = core.solve_batch(
        kind, kin.A, kin.B, c1, c2, float(N), Qs / N, SCAN_LO * scale, SCAN_HI * scale, N_SCAN, RTOL, MAX_ITER
    )
    if pot.finite_range:
        status = np.where((status == 0) & (E >= 0.0), 3, status)
    return E, r0, status


def size_parameters(sol: ETSolution, N=None):
    N = sol.N if N is None else N
    return list(_gamma(sol.Q, N, sol.r0))


def asymptotic_scaling_check(kin, pot, D, N_max):
    """Ground-state E/N for N = 2..N_max."""
    if N_max < 4:
        raise DomainError(f"N_max must be >= 4, got {N_max}")
    rows = []
    for N in range(2, N_max + 1):
        sol = solve(kin, pot, N, ground_state_Q(N, D))
        rows.append((N, sol.E / N))
    return rows
