"""Norm-free spectral learning from moment matrices.

The library turns observation pairs (x, y) into Gram and label-weighted
Gram matrices, solves the generalized symmetric eigenproblem between
them, and reads the spectrum as outcome values with probability weights.
On top of that sit point estimators, coverage diagnostics, a two-class
classifier, and a quadrature-style label-distribution estimate.
"""

from .basis import FAMILIES, BasisSpec, evaluate_basis, evaluate_basis_batch
from .errors import (
    CsvParse,
    DimensionMismatch,
    EmptyIntervalWarning,
    InvalidConfig,
    LabelNotInClasses,
    ModelParse,
    NoConvergence,
    NotPositiveDefinite,
    NotTwoClasses,
    RnmlError,
    SingularProjection,
    UnknownFamily,
)
from .linalg import (
    CholeskyFactor,
    EigenDecomposition,
    cholesky,
    condition_estimate,
    gen_sym_eigen,
    invert_spd,
    solve_cholesky,
    sym_eigen,
)
from .model import (
    ClusterModel,
    DistributionEstimate,
    OutlierReport,
    Prediction,
    TwoClassModel,
    coverage_eigenstates,
    distribution,
    fit,
    interval_coverage,
    mixed_state_average,
    omega_matrix,
    outlier_report,
    predict,
    project,
    state_from_x,
    top_coverage_states,
    two_class_classifier,
)
from .moments import (
    Dataset,
    MomentSet,
    build_moments,
    build_n_weights,
    build_weighted_matrix,
    regularize,
)
from .synth import TARGETS, SynthSpec, generate, target_fn

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "CholeskyFactor",
    "ClusterModel",
    "CsvParse",
    "Dataset",
    "DimensionMismatch",
    "DistributionEstimate",
    "EigenDecomposition",
    "EmptyIntervalWarning",
    "FAMILIES",
    "InvalidConfig",
    "LabelNotInClasses",
    "ModelParse",
    "MomentSet",
    "NoConvergence",
    "NotPositiveDefinite",
    "NotTwoClasses",
    "OutlierReport",
    "Prediction",
    "RnmlError",
    "SingularProjection",
    "SynthSpec",
    "TARGETS",
    "TwoClassModel",
    "UnknownFamily",
    "build_moments",
    "build_n_weights",
    "build_weighted_matrix",
    "cholesky",
    "condition_estimate",
    "coverage_eigenstates",
    "distribution",
    "evaluate_basis",
    "evaluate_basis_batch",
    "fit",
    "gen_sym_eigen",
    "generate",
    "interval_coverage",
    "invert_spd",
    "mixed_state_average",
    "omega_matrix",
    "outlier_report",
    "predict",
    "project",
    "regularize",
    "solve_cholesky",
    "state_from_x",
    "sym_eigen",
    "target_fn",
    "top_coverage_states",
    "two_class_classifier",
    "__version__",
]
