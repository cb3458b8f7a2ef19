"""Accretive-operator toolkit: certification, pseudoinverses, pencils, BVPs."""

from .errors import (
    AccuracyError,
    DimensionError,
    HypothesisError,
    ModelError,
    ParameterError,
    ParseError,
    PreconditionError,
    ResonanceError,
)
from .linops import (
    AccretivityReport,
    CartesianParts,
    accretivity_report,
    cartesian_parts,
    kato_representation,
    numerical_radius,
    numerical_range_boundary,
    sectorial_angle,
    spectral_inclusion_check,
    support_function,
)
from .pinv import (
    PerturbationCertificate,
    PinvResult,
    is_EP,
    perturbation_certificate,
    perturbed_pinv,
    pseudoinverse,
    second_power_inequalities,
    square_pinv_identities,
)
from .pencil import (
    PencilFactorization,
    QuadraticPencil,
    accretive_sqrt,
    balakrishnan_power,
    factorize,
    pencil_spectrum,
)
from .bvp import (
    BvpProblem,
    BvpSolution,
    chebyshev_grid,
    fd_oracle,
    solve_bvp,
)
from .spectral import (
    LaplacianModel,
    build_operators,
    condition_check,
    demo,
    per_mode_oracle,
)

__version__ = "0.1.0"
