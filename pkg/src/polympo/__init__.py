"""Exact matrix product operators for polynomial-times-exponential pair interactions."""

from .combinatorics import (
    Partition,
    binomial,
    eulerian,
    falling_factorial,
    multiplicity_factor,
    partitions,
    stirling1_unsigned,
    stirling2,
)
from .constraints import EtaEquation, PartitionMonomial, build_eta_lhs, eta_equations, eta_rhs_general, eta_rhs_power
from .document import MpoDocument
from .mpo import Op, OpEntry, SymbolicMPO, ToeplitzL, boundary_vectors, build_mpo, build_toeplitz, shift_matrix
from .polybasis import BasisWeights, PolynomialSpec, basis_weights, hankel_inverse, hankel_matrix
from .solver import CoefficientVector, UnsolvableError, solve_coefficients

__version__ = "0.1.0"
