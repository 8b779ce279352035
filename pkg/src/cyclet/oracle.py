"""Brute-force reference energies for two-particle cyclic systems.

For N = 2 the cyclic sum counts the single pair twice, so the internal
motion is governed by ``H = 2 T(|p|) + 2 W(r)`` in the relative coordinate.
Two independent solvers are provided: Numerov integration with node
counting (quadratic kinetics only) and Rayleigh-Ritz diagonalisation in a
harmonic-oscillator radial basis, where ``|p|**B`` is evaluated in momentum
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from . import _backend
from .errors import ConvergenceError, DomainError
from .kernel import FiniteRangePotential, PowerLawPotential

__all__ = [
    "EffectiveRadialProblem",
    "OracleResult",
    "reduce_two_body",
    "numerov_ground_state",
    "numerov_energy",
    "basis_diagonalize",
    "basis_matrices",
    "zero_energy_bound_states",
    "critical_coupling_scan",
]

NUMEROV_RTOL = 1e-8
BASIS_RTOL = 1e-6
ENERGY_TOL = 1e-13
RANGES = 15.0


@dataclass(frozen=True)
class EffectiveRadialProblem:
    """Relative motion ``kinetic_coefficient * |p|**B + V(r)`` with V = 2 W."""

    kinetic_coefficient: float
    B: float
    pot: object
    l: int = 0

    def V(self, r):
        return 2.0 * self.pot.W(r)

    @property
    def length(self):
        """Characteristic length of the potential."""
        if isinstance(self.pot, FiniteRangePotential):
            return self.pot.a
        s = self.B + self.pot.F
        if s == 0:
            return 1.0
        return (self.kinetic_coefficient / (2.0 * abs(self.pot.C))) ** (1.0 / s)

    @property
    def V_inf(self):
        """Limit of V at large r (inf for confining potentials)."""
        if isinstance(self.pot, PowerLawPotential) and self.pot.F > 0:
            return math.inf
        return 0.0

    @property
    def rV_origin(self):
        """lim r V(r) as r -> 0; nonzero only for the Coulomb case."""
        if isinstance(self.pot, PowerLawPotential):
            if self.pot.F == -1:
                return 2.0 * self.pot.C
            if self.pot.F < -1:
                raise DomainError("potentials more singular than 1/r have no ground state")
        return 0.0


@dataclass
class OracleResult:
    E: float
    method: str
    converged: bool
    meta: dict = field(default_factory=dict)


def reduce_two_body(kin, pot, l=0):
    return EffectiveRadialProblem(2.0 * kin.A, kin.B, pot, int(l))


# --------------------------------------------------------------------------
# Numerov


def _grid(prob, l, r_max, n):
    r = np.linspace(0.0, r_max, n + 1)
    veff = np.empty_like(r)
    veff[1:] = prob.V(r[1:]) / prob.kinetic_coefficient + l * (l + 1) / r[1:] ** 2
    veff[0] = 0.0
    return r, veff


def _ku0(prob, l, h, u1):
    # limit of k^2 u at r = 0 for u ~ r^(l+1)
    if l == 0:
        return -prob.rV_origin / prob.kinetic_coefficient * (u1 / h)
    if l == 1:
        return -2.0 * u1 / h**2
    return 0.0


def _count_nodes(core, veff, h, e_scaled, ku0, u1):
    k2 = e_scaled - veff
    k2[0] = 0.0
    nodes, _, _ = core.numerov(k2, h, 0.0, u1, ku0)
    return nodes


def numerov_energy(prob, l, r_max, n, core=None):
    """Lowest Dirichlet eigenvalue on (0, r_max] with n Numerov steps.

    Sturm oscillation: the solution regular at the origin has as many nodes
    inside the box as there are eigenvalues below the trial energy, so the
    ground state is the threshold where the node count leaves zero.
    """
    core = core or _backend.core
    kc = prob.kinetic_coefficient
    r, veff = _grid(prob, l, r_max, n)
    h = r[1]
    u1 = h ** (l + 1)
    ku0 = _ku0(prob, l, h, u1)
    lo = kc * float(veff[1:].min())
    if _count_nodes(core, veff, h, lo / kc, ku0, u1) != 0:
        raise ConvergenceError("node count nonzero at the potential minimum")
    gap = max(1.0, abs(lo))
    hi = lo + gap
    for _ in range(200):
        if _count_nodes(core, veff, h, hi / kc, ku0, u1) >= 1:
            break
        gap *= 2.0
        hi = lo + gap
    else:
        raise ConvergenceError("failed to bracket the ground state by node counting")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if hi - lo <= ENERGY_TOL * max(1.0, abs(mid)):
            break
        if _count_nodes(core, veff, h, mid / kc, ku0, u1) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _outer_turning_point(prob, l, E):
    """Largest r with V_eff(r) <= E, or 0 when E lies below V_eff everywhere."""
    kc = prob.kinetic_coefficient

    def above(r):
        return float(prob.V(r)) + kc * l * (l + 1) / r**2 > E

    r = prob.length
    if not np.isfinite(prob.V_inf) or E < prob.V_inf:
        while not above(r):
            r *= 2.0
            if r > 1e12 * prob.length:
                return 0.0
        # walk back to the last allowed point on a coarse log grid, then bisect
        rs = np.geomspace(prob.length * 1e-6, r, 400)
        allowed = [x for x in rs if not above(x)]
        if not allowed:
            return 0.0
        lo = max(allowed)
        hi = rs[np.searchsorted(rs, lo) + 1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if above(mid):
                hi = mid
            else:
                lo = mid
        return lo
    return 0.0


def _box_size(prob, l, E):
    ell = prob.length
    if E < prob.V_inf and np.isfinite(prob.V_inf):
        ell = max(ell, math.sqrt(prob.kinetic_coefficient / (prob.V_inf - E)))
    return _outer_turning_point(prob, l, E) + RANGES * ell


def numerov_ground_state(prob, l=None, steps_per_length=200, max_halvings=8, core=None):
    """Ground-state energy of the reduced radial equation (B = 2 only).

    The box edge is the outer classical turning point plus fifteen
    characteristic lengths (the larger of the potential range and the decay
    length of the bound state).  The step is halved until the energy
    changes by less than 1e-8 relative.  For finite-range potentials that
    bind nothing the box is enlarged a few times and the (positive) box
    energy is returned with ``meta["bound"] = False``.
    """
    if prob.B != 2:
        raise DomainError("Numerov oracle requires quadratic kinematics (B = 2)")
    l = prob.l if l is None else int(l)
    core = core or _backend.core
    ell = prob.length

    def steps(r_max):
        return max(2000, int(steps_per_length * r_max / ell))

    r_max = RANGES * ell
    E = numerov_energy(prob, l, r_max, steps(r_max), core)
    expansions = 0
    for _ in range(40):
        if E >= prob.V_inf:
            if expansions >= 6:
                break
            r_max *= 2.0
            expansions += 1
        else:
            need = _box_size(prob, l, E)
            if need <= r_max:
                break
            r_max = need
        E = numerov_energy(prob, l, r_max, steps(r_max), core)
    n = steps(r_max)
    history = [E]
    converged = False
    for _ in range(max_halvings):
        n *= 2
        E_new = numerov_energy(prob, l, r_max, n, core)
        history.append(E_new)
        if abs(E_new - E) < NUMEROV_RTOL * max(1.0, abs(E_new)):
            E = E_new
            converged = True
            break
        E = E_new
    return OracleResult(
        E=float(E),
        method="Numerov",
        converged=converged,
        meta={"r_max": r_max, "steps": n, "h": r_max / n, "bound": bool(E < prob.V_inf), "history": history},
    )


def zero_energy_bound_states(prob, r_max=None, n=None, core=None):
    """Number of s-wave bound states of a finite-range well (E < 0).

    Counts nodes of the zero-energy solution, including the zero that its
    straight-line continuation beyond the well would reach.
    """
    core = core or _backend.core
    ell = prob.length
    r_max = 40.0 * ell if r_max is None else r_max
    n = int(200 * r_max / ell) if n is None else n
    r, veff = _grid(prob, 0, r_max, n)
    h = r[1]
    k2 = -veff
    k2[0] = 0.0
    nodes, u, u_prev = core.numerov(k2, h, 0.0, h, _ku0(prob, 0, h, h))
    slope = (u - u_prev) / h
    if slope != 0.0 and -u / slope > 0.0:
        nodes += 1
    return nodes


def critical_coupling_scan(A, B, shape, a=1.0, rtol=1e-6, core=None):
    """Smallest g binding the N = 2 ground state, by bisection on g.

    Each step decides binding from the zero-energy solution; the
    computation is repeated with half the step as a discretisation check.
    """
    if B != 2:
        raise DomainError("critical coupling oracle requires B = 2")
    from .kernel import KineticSpec, make_finite_range_potential

    kin = KineticSpec(A, B)

    def bound(g, n_per):
        prob = reduce_two_body(kin, make_finite_range_potential(g, shape, a))
        return zero_energy_bound_states(prob, n=int(n_per * 40), core=core) >= 1

    def scan(n_per):
        lo, hi = 0.0, 1.0
        while not bound(hi, n_per):
            lo, hi = hi, 2.0 * hi
            if hi > 1e12:
                raise ConvergenceError("no binding found for any coupling")
        while hi - lo > 0.1 * rtol * hi:
            mid = 0.5 * (lo + hi)
            if bound(mid, n_per):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    g1 = scan(200)
    g2 = scan(400)
    return OracleResult(
        E=g2,
        method="NumerovZeroEnergy",
        converged=abs(g2 - g1) <= rtol * g2,
        meta={"g_c": g2, "g_c_coarse": g1, "shape": str(shape), "A": A, "B": B, "a": a},
    )


# --------------------------------------------------------------------------
# Oscillator basis


def _radial_functions(s, size, l):
    """Normalised oscillator radial functions u_n(s), n < size, at points s.

    u_n(s) = N_n s^(l+1) exp(-s^2/2) L_n^(l+1/2)(s^2), unit norm in ds.
    """
    alpha = l + 0.5
    x = s * s
    out = np.empty((size, len(s)))
    # log N_0 = 0.5 * log(2 / Gamma(alpha + 1))
    pref = np.exp(0.5 * (math.log(2.0) - math.lgamma(alpha + 1.0)) + (l + 1) * np.log(s) - 0.5 * x)
    out[0] = pref
    if size > 1:
        out[1] = pref * (1.0 + alpha - x) * math.sqrt(1.0 / (alpha + 1.0))
    for k in range(1, size - 1):
        # normalised three-term recurrence of L_k^alpha
        c_next = math.sqrt((k + 1.0) * (k + alpha + 1.0))
        c_prev = math.sqrt(k * (k + alpha))
        out[k + 1] = ((2.0 * k + 1.0 + alpha - x) * out[k] - c_prev * out[k - 1]) / c_next
    return out


def _quadrature(size, l, order):
    s_max = math.sqrt(4.0 * size + 2.0 * l + 80.0)
    t, w = leggauss(order)
    s = 0.5 * s_max * (t + 1.0)
    return s, 0.5 * s_max * w


def basis_matrices(prob, size, scale, l=None, order=None):
    """Kinetic and potential matrices in the oscillator basis of length ``scale``.

    The momentum-space radial functions are the same functions of p*scale up
    to a sign (-1)^n, so ``|p|**B`` is integrated on the same nodes.
    """
    l = prob.l if l is None else int(l)
    order = max(200, 3 * size) if order is None else order
    s, w = _quadrature(size, l, order)
    phi = _radial_functions(s, size, l)
    pw = phi * w
    sign = (-1.0) ** np.arange(size)
    kin = prob.kinetic_coefficient * (s / scale) ** prob.B
    T = (pw * kin) @ phi.T * np.outer(sign, sign)
    V = (pw * prob.V(scale * s)) @ phi.T
    return T, V


def _ground(prob, size, scale, l, order=None):
    T, V = basis_matrices(prob, size, scale, l, order)
    return float(eigh(T + V, eigvals_only=True, subset_by_index=[0, 0])[0])


def _best_scale(prob, size, l, guess):
    res = minimize_scalar(
        lambda t: _ground(prob, size, math.exp(t), l),
        bracket=(math.log(guess) - 0.5, math.log(guess) + 0.5),
        method="golden",
        tol=1e-4,
    )
    return math.exp(res.x), float(res.fun)


def basis_diagonalize(prob, l=None, basis_size=20, scale=None, max_size=400, step=10):
    """Variational ground state in an oscillator basis.

    With ``scale`` given, the lowest eigenvalue at that fixed basis size and
    length is returned.  Otherwise the length is optimised by golden-section
    search and the basis grows by ``step`` until the ground value changes by
    less than 1e-6 relative.  At fixed length a larger basis can only lower
    the value; an increase signals a quadrature failure.
    """
    l = prob.l if l is None else int(l)
    if basis_size < 4:
        raise DomainError(f"basis_size must be >= 4, got {basis_size}")
    if scale is not None:
        if not scale > 0:
            raise DomainError(f"scale must be positive, got {scale}")
        E = _ground(prob, basis_size, scale, l)
        return OracleResult(E, "BasisDiagonalization", False, {"basis_size": basis_size, "scale": scale})

    size = basis_size
    b, E = _best_scale(prob, size, l, prob.length)
    history = [(size, b, E)]
    converged = False
    while size + step <= max_size:
        fixed = _ground(prob, size + step, b, l)
        if fixed > E + 1e-10 * max(1.0, abs(E)):
            raise ConvergenceError(
                f"ground value rose from {E} to {fixed} when the basis grew to {size + step}",
                diagnostics={"history": history},
            )
        size += step
        b_new, E_new = _best_scale(prob, size, l, b)
        if fixed < E_new:
            b_new, E_new = b, fixed
        history.append((size, b_new, E_new))
        done = abs(E - E_new) < BASIS_RTOL * max(1.0, abs(E_new))
        b, E = b_new, E_new
        if done:
            converged = True
            break
    order = max(200, 3 * size)
    E_check = _ground(prob, size, b, l, order=2 * order)
    return OracleResult(
        E=E,
        method="BasisDiagonalization",
        converged=converged,
        meta={
            "basis_size": size,
            "scale": b,
            "quadrature_order": order,
            "quadrature_check": abs(E_check - E),
            "history": history,
        },
    )
