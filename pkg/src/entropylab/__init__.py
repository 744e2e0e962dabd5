"""Entropies, equilibrium measures and asymptotics of symmetric Pollaczek polynomials."""

from .asymptotics import ResidualTable, build_table, predicted_E
from .entropy import (EntropyReport, compute_E_direct, compute_E_potential, compute_G,
                      compute_report, mutual_energy, nu_potential, predicted_G, tau)
from .equilibrium import (EquilibriumProfile, MrsSolution, equilibrium_profile,
                          levin_integral, mrs_number)
from .orthopoly import PollaczekParams, RecurrenceCoefficients, evaluate, zeros
from .quadrature import QuadratureRule, gauss_legendre_rule, gauss_w_rule

__all__ = [
    "PollaczekParams", "RecurrenceCoefficients", "evaluate", "zeros",
    "QuadratureRule", "gauss_legendre_rule", "gauss_w_rule",
    "EntropyReport", "compute_report", "compute_E_direct", "compute_E_potential",
    "compute_G", "nu_potential", "mutual_energy", "tau", "predicted_G",
    "MrsSolution", "EquilibriumProfile", "mrs_number", "equilibrium_profile",
    "levin_integral", "ResidualTable", "build_table", "predicted_E",
]

__version__ = "0.1.0"
