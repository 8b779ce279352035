"""Exact nonrelativistic cyclic harmonic oscillator.

The cyclic coupling matrix is circulant, so its spectrum and eigenvectors
are trigonometric.  All trigonometric arguments are rational multiples of
pi and are folded into the first quadrant before evaluation, which keeps
``lambda_N == 0`` and ``lambda_i == lambda_{N-i}`` exact in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "QuantumNumbers",
    "ModeData",
    "Level",
    "sinpi",
    "cospi",
    "mode_coefficients",
    "lambda_coefficients",
    "transform_matrix",
    "ground_state_quadratic_form",
    "mode_data",
    "oscillator_energy",
    "ground_state_energy",
    "size_parameters_exact",
    "enumerate_levels",
    "q_values_up_to_quanta",
]

TIE_TOL = 1e-9


def sinpi(k, n):
    """sin(k*pi/n) for integers k, n > 0 with exact argument reduction."""
    k %= 2 * n
    sign = 1.0
    if k >= n:
        k -= n
        sign = -1.0
    if 2 * k > n:
        k = n - k
    if k == 0:
        return 0.0
    return sign * math.sin(math.pi * k / n)


def cospi(k, n):
    """cos(k*pi/n), via cos(x) = sin(pi/2 - x)."""
    return sinpi(n - 2 * k, 2 * n)


def _check_N(N):
    if int(N) != N or N < 2:
        raise DomainError(f"particle number must be an integer >= 2, got {N}")
    return int(N)


def _check_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial and orbital labels of the N-1 internal oscillator modes."""

    N: int
    D: int
    n: tuple
    l: tuple

    def __post_init__(self):
        _check_N(self.N)
        if int(self.D) != self.D or self.D < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.D}")
        n, l = tuple(self.n), tuple(self.l)
        if len(n) != self.N - 1 or len(l) != self.N - 1:
            raise DomainError(f"need {self.N - 1} radial and orbital labels, got {len(n)} and {len(l)}")
        for v in n + l:
            if int(v) != v or v < 0:
                raise DomainError(f"quantum numbers must be nonnegative integers, got {v}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "D", int(self.D))
        object.__setattr__(self, "n", tuple(int(v) for v in n))
        object.__setattr__(self, "l", tuple(int(v) for v in l))

    @classmethod
    def ground(cls, N, D=3):
        N = _check_N(N)
        return cls(N, D, (0,) * (N - 1), (0,) * (N - 1))

    @classmethod
    def from_nu(cls, N, D, nu):
        """Representative labels for mode quanta nu_i = 2 n_i + l_i."""
        return cls(N, D, tuple(v // 2 for v in nu), tuple(v % 2 for v in nu))

    @property
    def nu(self):
        return tuple(2 * a + b for a, b in zip(self.n, self.l))


@dataclass(frozen=True)
class ModeData:
    lam: np.ndarray
    U: np.ndarray
    Z: np.ndarray


@dataclass(frozen=True)
class Level:
    """One distinct oscillator level.

    ``Q`` is the global quantum number and ``energy_factor`` is E/omega
    (the two coincide for the exact oscillator).  ``tuples`` lists every
    occupation pattern (nu_1, ..., nu_{N-1}) in the level.
    """

    Q: float
    energy_factor: float
    multiplicity: int
    tuples: tuple
    representative: QuantumNumbers


def mode_coefficients(N):
    """sqrt(lambda_i) = 2 sin(i pi / N) for i = 1..N-1."""
    N = _check_N(N)
    return np.array([2.0 * sinpi(i, N) for i in range(1, N)])


def lambda_coefficients(N):
    N = _check_N(N)
    return np.array([4.0 * sinpi(i, N) ** 2 for i in range(1, N + 1)])


def transform_matrix(N):
    """Involutive real transform to the normal coordinates (a Hartley matrix)."""
    N = _check_N(N)
    U = np.empty((N, N))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            U[i - 1, j - 1] = cospi(2 * i * j, N) + sinpi(2 * i * j, N)
    return U / math.sqrt(N)


def ground_state_quadratic_form(N):
    """Circulant matrix Z with phi_0 ~ exp(-(m omega / 2) sum Z_ij r_i . r_j).

    Closed form Z_ij = (2/N) sin(pi/N) / (cos(2 (i-j) pi/N) - cos(pi/N)).
    The denominator never vanishes because 2(i-j) is even.
    """
    N = _check_N(N)
    s, c = sinpi(1, N), cospi(1, N)
    row = np.array([(2.0 / N) * s / (cospi(2 * d, N) - c) for d in range(N)])
    idx = np.arange(N)
    return row[(idx[:, None] - idx[None, :]) % N]


def mode_data(N):
    return ModeData(lambda_coefficients(N), transform_matrix(N), ground_state_quadratic_form(N))


def oscillator_energy(m, omega, q):
    _check_positive(m=m, omega=omega)
    c = mode_coefficients(q.N)
    return omega * math.fsum(ci * (v + 0.5 * q.D) for ci, v in zip(c, q.nu))


def ground_state_energy(m, omega, N, D):
    _check_positive(m=m, omega=omega)
    N = _check_N(N)
    return omega * D / math.tan(math.pi / (2 * N))


def size_parameters_exact(m, omega, N):
    _check_positive(m=m, omega=omega)
    lam = lambda_coefficients(N)[:-1]
    return (m * m * omega * omega * lam) ** 0.25


def _multiplicity(nu, angular):
    if angular:
        return (nu + 1) * (nu + 2) // 2
    return nu // 2 + 1


def _tuples_below(coef, limit):
    """All occupation tuples with sum(coef * nu) <= limit (depth-first)."""
    order = np.argsort(coef, kind="stable")
    out = []
    nu = [0] * len(coef)

    def walk(pos, used):
        if pos == len(order):
            out.append((used, tuple(nu)))
            return
        i = order[pos]
        k = 0
        while used + k * coef[i] <= limit + TIE_TOL:
            nu[i] = k
            walk(pos + 1, used + k * coef[i])
            k += 1
        nu[i] = 0

    walk(0, 0.0)
    return out


def _merge(values, tol=TIE_TOL):
    """Group sorted (value, payload) pairs whose values agree within tol."""
    groups = []
    for v, item in values:
        if groups and v - groups[-1][0] <= tol:
            groups[-1][1].append(item)
        else:
            groups.append((v, [item]))
    return groups


def enumerate_levels(N, D, K, angular=False):
    """The K lowest distinct levels of the exact cyclic oscillator.

    Levels are found by enumerating every occupation pattern whose
    excitation sum(2 sin(i pi/N) nu_i) lies below a threshold, raising the
    threshold in steps of the smallest mode coefficient until the K-th level
    is provably complete.  Values within 1e-9 are merged.

    ``multiplicity`` counts (n_i, l_i) assignments; with ``angular`` (D=3
    only) each orbital label is weighted by 2l+1.
    """
    N = _check_N(N)
    if K < 1:
        raise DomainError(f"level count must be >= 1, got {K}")
    if angular and D != 3:
        raise DomainError("angular multiplicity weighting is only defined for D=3")
    coef = mode_coefficients(N)
    q0 = 0.5 * D * math.fsum(coef)
    step = float(coef.min())
    limit = step
    while True:
        found = sorted(_tuples_below(coef, limit))
        groups = _merge(found)
        if len(groups) >= K and groups[K - 1][0] + TIE_TOL <= limit:
            break
        limit += step
    levels = []
    for exc, tuples in groups[:K]:
        tuples = sorted(tuples)
        mult = sum(math.prod(_multiplicity(v, angular) for v in t) for t in tuples)
        Q = q0 + exc
        levels.append(Level(Q, Q, mult, tuple(tuples), QuantumNumbers.from_nu(N, D, tuples[0])))
    return levels


def q_values_up_to_quanta(N, D, max_quanta):
    """Sorted distinct global quantum numbers with sum(nu_i) <= max_quanta.

    Modes i and N-i share a coefficient, so Q depends only on the quanta
    carried by each coefficient group; compositions are built with numpy.
    """
    N = _check_N(N)
    coef = mode_coefficients(N)
    q0 = 0.5 * D * math.fsum(coef)
    groups = [coef[g - 1] for g in range(1, N // 2 + 1)]
    exc = np.zeros(1)
    used = np.zeros(1, dtype=np.int64)
    for c in groups:
        parts_e, parts_u = [], []
        for k in range(max_quanta + 1):
            keep = used + k <= max_quanta
            parts_e.append(exc[keep] + k * c)
            parts_u.append(used[keep] + k)
        exc = np.concatenate(parts_e)
        used = np.concatenate(parts_u)
    q = np.sort(q0 + exc)
    keep = np.ones(len(q), dtype=bool)
    keep[1:] = np.diff(q) > TIE_TOL
    return q[keep]
