"""Sup-norm distances between cosine families and their spectral structure."""
from .chebyshev import ChebPair, ExtremumResult, cheb_eval, sup_cheb_distance
from .decomposition import (
    CosineFamily,
    Decomposition,
    ProbeReport,
    RigidityReport,
    boundedness_probe,
    decompose,
    family_eval,
    frequency_components,
    rigidity_check,
    spectral_idempotents,
    sup_family_distance,
)
from .errors import (
    BudgetError,
    ConsistencyError,
    CosineGapError,
    DomainError,
    HypothesisNotMetError,
    IllSeparatedSpectrumError,
    NotDiagonalizableError,
    PreconditionError,
    SeriesTruncationError,
    UnboundedFamilyError,
)
from .kronecker import RecordSequence, convergent_boost, running_sup
from .matrix_calculus import (
    SeriesOptions,
    SlowConvergenceWarning,
    alpha_closed_form,
    alpha_coefficients,
    arccos_coefficients,
    coefficient_partial_sums,
    mat_arccos,
    mat_cos,
    mat_sin,
    mat_sinc,
    nilpotent_cancellation_check,
    power_boundedness,
    reconstruct_sequence,
)
from .matrix_io import dump_matrix, load_matrix, parse_matrix
from .omega import (
    OPTIMAL_CONSTANT,
    DistanceReport,
    OmegaSet,
    RationalFrequency,
    classify_ratio,
    enumerate_omega,
    scalar_distance,
)

__version__ = "0.1.0"
