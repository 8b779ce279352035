"""Envelope-theory bound states of cyclic systems of identical particles."""

from ._backend import NAME as BACKEND
from .errors import ConvergenceError, DomainError, NoBoundState
from .kernel import (
    Character,
    Curvature,
    FiniteRangePotential,
    KineticSpec,
    PotentialSpec,
    PowerLawPotential,
    Shape,
    make_finite_range_potential,
    make_power_kinetics,
    make_power_potential,
    variational_character,
)
from .oscillator import QuantumNumbers, enumerate_levels
from .et_solver import ETSolution, global_quantum_number, ground_state_Q, solve, solve_many

__version__ = "0.1.0"
