"""Spectral solver for Sturm-Liouville problems with a frozen argument on
bounded time scales.

The solver builds the characteristic function of the boundary value problem
exactly (as a polynomial) on finite scales and analytically (by shooting)
on two-interval scales, computes complete spectra, and cross-validates them
against a matrix reformulation, a count law, closed-form leading terms, and
eigenvalue asymptotics.
"""
from .continuum import (
    AsymptoticReport,
    EigAsymptote,
    ShootState,
    asymptotic_table,
    char_fn,
    count_eigs_in_box,
    cross_gap,
    find_real_eigs,
    integrate_dense,
    shoot,
    wronskian_at,
)
from .errors import (
    ContourError,
    ConvergenceError,
    DegenerateProblemError,
    DomainError,
    FrozenSLError,
    ValidationError,
)
from .finite import (
    BasisTable,
    LeadingTarget,
    LeadingTermPrediction,
    build_basis,
    char_poly,
    char_value,
    det_A,
    det_A_exact,
    eigs_finite,
    predict_leading,
    predicted_count,
    step_backward,
    step_forward,
    wronskian_table,
)
from .matrixform import (
    DenseMatrix,
    bc_to_general,
    build_Q,
    char_poly_dense,
    eigs_dense,
)
from .poly import Polynomial, RootSet, find_roots
from .problem import (
    BoundaryCoefficients,
    ConstantPotential,
    Eigenvalue,
    PolynomialPotential,
    ProblemSpec,
    SampledPotential,
    SeparatedBC,
    Spectrum,
    TablePotential,
    match_distance,
)
from .timescale import FiniteScale, GridPoint, TimeScale, TwoIntervalScale

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport",
    "BasisTable",
    "BoundaryCoefficients",
    "ConstantPotential",
    "ContourError",
    "ConvergenceError",
    "DegenerateProblemError",
    "DenseMatrix",
    "DomainError",
    "EigAsymptote",
    "Eigenvalue",
    "FiniteScale",
    "FrozenSLError",
    "GridPoint",
    "LeadingTarget",
    "LeadingTermPrediction",
    "Polynomial",
    "PolynomialPotential",
    "ProblemSpec",
    "RootSet",
    "SampledPotential",
    "SeparatedBC",
    "ShootState",
    "Spectrum",
    "TablePotential",
    "TimeScale",
    "TwoIntervalScale",
    "ValidationError",
    "asymptotic_table",
    "bc_to_general",
    "build_Q",
    "build_basis",
    "char_fn",
    "char_poly",
    "char_poly_dense",
    "char_value",
    "count_eigs_in_box",
    "cross_gap",
    "det_A",
    "det_A_exact",
    "eigs_dense",
    "eigs_finite",
    "find_real_eigs",
    "find_roots",
    "integrate_dense",
    "match_distance",
    "predict_leading",
    "predicted_count",
    "shoot",
    "step_backward",
    "step_forward",
    "wronskian_at",
    "wronskian_table",
]
