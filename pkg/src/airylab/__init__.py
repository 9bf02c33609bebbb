"""Pseudospectral laboratory for the Airy Strichartz inequality: propagators
and symmetries, refined concentration estimates, bubble extraction, profile
separation diagnostics, and extremizer search."""

from .bubbles import (
    Bubble,
    ExtractionConfig,
    ExtractionReport,
    extract_bubbles,
    extract_bubbles_real,
    group_by_scale_orthogonality,
    reconstruct_real,
)
from .errors import (
    AirylabError,
    AliasingError,
    DegenerateInputError,
    InvalidExponentError,
    InvalidInputError,
    InvalidParameterError,
    SingularMultiplierError,
)
from .estimators import BubbleExtractor, StrichartzMaximizer
from .extremal import (
    AscentOptions,
    BaselineResult,
    MaximizerTrace,
    dichotomy_report,
    embedding_experiment,
    gradient,
    maximize,
    objective,
    schrodinger_baseline,
)
from .grid import (
    Field,
    GridSpec,
    SpectralField,
    gaussian_field,
    random_band_limited_field,
    read_field,
    write_field,
)
from .norms import (
    AIRY_SYMMETRIC,
    SpaceTimeField,
    StrichartzExponents,
    check_admissible,
    evolution_stack,
    inner_product,
    l2_norm,
    schrodinger_l6_norm,
    schrodinger_ratio,
    spacetime_norm,
    strichartz_functional,
    symmetric_airy_norm,
)
from .refined import (
    DyadicInterval,
    IntervalValue,
    WhitneyPair,
    concentration_functional,
    level_set_split,
    refined_ratio,
    restriction_decay_check,
    whitney_pair_for,
    whitney_pairs,
)
from .separation import (
    SeparationScore,
    l6_additivity_defect,
    profile_inner_product,
    separation_score,
)
from .spectral import (
    SymmetryParams,
    airy_propagate,
    apply_symmetry,
    evaluate_field,
    forward_fourier,
    fractional_derivative,
    inverse_fourier,
    schrodinger_propagate,
    spectral_centroid,
)

__version__ = "0.1.0"
