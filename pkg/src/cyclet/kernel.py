"""Kinematics and pair potentials with exact derivatives and convexity data.

Every spec carries the sign of the second derivative of its ``b`` function,
defined through ``T(x) = b_T(x**2)`` and ``W(x) = b_W(x**2)``.  The sign is
declared from the closed form and then checked against sampled second
differences when the object is built, so a wrong declaration fails loudly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Curvature",
    "Character",
    "Shape",
    "KineticSpec",
    "PotentialSpec",
    "PowerLawPotential",
    "FiniteRangePotential",
    "make_power_kinetics",
    "make_power_potential",
    "make_finite_range_potential",
    "variational_character",
]

# codes understood by the compiled/fallback kernels
KIND_POWER = 0
KIND_GAUSSIAN = 1
KIND_EXPONENTIAL = 2


class Curvature(enum.Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def from_sign(cls, s):
        return cls(int(np.sign(s)))


class Character(str, enum.Enum):
    UPPER_BOUND = "UpperBound"
    LOWER_BOUND = "LowerBound"
    EXACT = "Exact"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


class Shape(str, enum.Enum):
    GAUSSIAN = "Gaussian"
    EXPONENTIAL = "Exponential"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for s in cls:
            if str(value).lower() == s.value.lower():
                return s
        raise DomainError(f"unknown finite-range shape {value!r}")

    def w(self, y):
        if self is Shape.GAUSSIAN:
            return np.exp(-y * y)
        return np.exp(-y)

    def dw(self, y):
        if self is Shape.GAUSSIAN:
            return -2.0 * y * np.exp(-y * y)
        return -np.exp(-y)


def _check_curvature(b, declared, xs, what):
    """Compare a declared curvature class with sampled second differences.

    A nonzero class is only contradicted by a resolved difference of the
    opposite sign; differences below the zero threshold are inconclusive.
    """
    for x in xs:
        h = 0.05 * x
        vals = (b(x - h), b(x), b(x + h))
        d2 = vals[0] - 2.0 * vals[1] + vals[2]
        scale = max(abs(v) for v in vals)
        tiny = abs(d2) <= 1e-10 * scale
        if declared is Curvature.ZERO:
            if not tiny:
                raise DomainError(f"{what}: declared zero curvature but sampled second difference is {d2:g} at x={x:g}")
        elif not tiny and np.sign(d2) != declared.value:
            raise DomainError(f"{what}: declared {declared.name} curvature contradicted at x={x:g}")


@dataclass(frozen=True)
class KineticSpec:
    """Power-law kinematics ``T(p) = A p**B``."""

    A: float
    B: float
    curvature: Curvature = field(init=False)

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0) or not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise DomainError(f"power kinetics needs A > 0 and B > 0, got A={self.A}, B={self.B}")
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))
        object.__setattr__(self, "curvature", Curvature.from_sign(self.B - 2.0))
        _check_curvature(self.b, self.curvature, np.logspace(-3, 3, 10), "kinetics")

    def T(self, p):
        return self.A * np.power(p, self.B)

    def dT(self, p):
        return self.A * self.B * np.power(p, self.B - 1.0)

    def b(self, x):
        return self.A * np.power(x, 0.5 * self.B)

    def describe(self):
        return {"A": self.A, "B": self.B}


class PotentialSpec:
    """Common interface of the built-in pair potentials."""

    curvature: Curvature
    finite_range = False

    def W(self, r):
        raise NotImplementedError

    def dW(self, r):
        raise NotImplementedError

    def b(self, x):
        return self.W(np.sqrt(x))

    def length_scale(self, kin=None):
        raise NotImplementedError

    def kernel_params(self):
        """(kind code, c1, c2) triple consumed by the numerical core."""
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLawPotential(PotentialSpec):
    """``W(r) = C r**F`` with ``C F > 0``."""

    C: float
    F: float
    curvature: Curvature = field(init=False)

    def __post_init__(self):
        if not self.C * self.F > 0:
            raise DomainError(f"power potential needs C*F > 0, got C={self.C}, F={self.F}")
        object.__setattr__(self, "C", float(self.C))
        object.__setattr__(self, "F", float(self.F))
        half = 0.5 * self.F
        object.__setattr__(self, "curvature", Curvature.from_sign(self.C * half * (half - 1.0)))
        _check_curvature(self.b, self.curvature, np.logspace(-3, 3, 10), "potential")

    def W(self, r):
        return self.C * np.power(r, self.F)

    def dW(self, r):
        return self.C * self.F * np.power(r, self.F - 1.0)

    def b(self, x):
        return self.C * np.power(x, 0.5 * self.F)

    def length_scale(self, kin=None):
        if kin is None or kin.B + self.F == 0:
            return 1.0
        return (kin.A / abs(self.C)) ** (1.0 / (kin.B + self.F))

    def kernel_params(self):
        return KIND_POWER, self.C, self.F

    def describe(self):
        return {"kind": "power", "C": self.C, "F": self.F}


@dataclass(frozen=True)
class FiniteRangePotential(PotentialSpec):
    """``W(r) = -g w(r/a)`` for a Gaussian or exponential profile ``w``."""

    g: float
    shape: Shape
    a: float = 1.0
    curvature: Curvature = field(init=False)
    finite_range = True

    def __post_init__(self):
        if not (self.g > 0 and self.a > 0):
            raise DomainError(f"finite-range potential needs g > 0 and a > 0, got g={self.g}, a={self.a}")
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "shape", Shape.parse(self.shape))
        # b_W'' < 0 for both shapes at every x > 0
        object.__setattr__(self, "curvature", Curvature.NEGATIVE)
        _check_curvature(self.b, self.curvature, self.a**2 * np.logspace(-2, 2, 10), "potential")

    def W(self, r):
        return -self.g * self.shape.w(np.asarray(r, dtype=float) / self.a)

    def dW(self, r):
        return -(self.g / self.a) * self.shape.dw(np.asarray(r, dtype=float) / self.a)

    def length_scale(self, kin=None):
        return self.a

    def kernel_params(self):
        code = KIND_GAUSSIAN if self.shape is Shape.GAUSSIAN else KIND_EXPONENTIAL
        return code, self.g, self.a

    def describe(self):
        return {"kind": "finite", "g": self.g, "shape": self.shape.value, "a": self.a}


def make_power_kinetics(A, B):
    return KineticSpec(A, B)


def make_power_potential(C, F):
    return PowerLawPotential(C, F)


def make_finite_range_potential(g, shape, a=1.0):
    return FiniteRangePotential(g, Shape.parse(shape), a)


def variational_character(kin, pot):
    """Bound direction of the envelope energy from the two curvature classes.

    Concave ``b`` functions give an upper bound, convex ones a lower bound.
    A vanishing second derivative defers to the other function.
    """
    signs = {kin.curvature.value, pot.curvature.value} - {0}
    if not signs:
        return Character.EXACT
    if signs == {-1}:
        return Character.UPPER_BOUND
    if signs == {1}:
        return Character.LOWER_BOUND
    return Character.INDETERMINATE
