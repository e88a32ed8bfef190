"""Spectral distances between Fock states of a two-mode noncommutative phase space.

Submodules
----------
hilbert      deformation parameters, truncated Fock space, ladder operators
triple       gamma matrices, Dirac operator, commutators, operator norms
ball         finite-difference calculus and constraint relations for diagonal elements
closed_form  closed-form distances, zeta partial sums, candidate optimal elements
numeric      numerical supremum over diagonal elements and an off-diagonal probe
cli          ``ncps`` command-line entry point
"""

from .ball import DiagonalElement, constraint_relations, feasible_diagonal, gh_grid
from .closed_form import (
    check_additivity,
    check_pythagoras,
    distance,
    optimal_element_axis,
    optimal_element_general,
    zeta_partial,
)
from .errors import (
    DegeneratePair,
    DimensionMismatch,
    InvalidCutoff,
    InvalidParameter,
    LabelOutOfRange,
    NCPSError,
    NotConverged,
    NotHermitian,
    NumericalFailure,
    SingularRegime,
    ZeroElement,
)
from .hilbert import FockLabel, PhaseSpaceParams, make_params, make_params_mu_nu
from .numeric import SupSolverConfig, brute_force_oracle, probe_off_diagonal, scale_to_ball, sup_distance
from .triple import ball_condition, dirac_commutator, dirac_operator, gamma_matrices, operator_norm

__version__ = "0.1.0"
