"""Weighted shifts: Hankel positivity, atomic measures, Aluthge transforms and
k-jumping flatness, in exact rational arithmetic."""

from .aluthge import (
    AluthgeResult,
    aluthge_classify,
    aluthge_moment_squares,
    aluthge_weights,
    classify_sqrt_sequence,
    fib_obstruction,
    four_atom_obstruction,
    negative_square_atom_obstruction,
    radical_psd,
    shift_of_measure,
    thm21_predicate,
)
from .core import (
    AtomicCharge,
    InsufficientData,
    MomentSequence,
    NotMomentSequence,
    PreconditionError,
    Radical,
    RecursionSpec,
    SearchSpaceTooLarge,
    ShiftError,
    WeightSequence,
    arithmetic,
    arithmetic_mode,
    delta,
    moment_positivity_horizon,
    moments_to_weights,
    weights_to_moments,
)
from .flatness import (
    PropagationError,
    PropagationReport,
    classic_flatness_check,
    detect_k_jumping,
    jumping_charpoly,
    jumping_type,
    lemma_extension_check,
    parity_classification,
    propagate,
)
from .hankel import (
    ClassificationReport,
    HankelMatrix,
    PsdCertificate,
    classify,
    extract_recursion,
    hankel,
    is_psd,
    property_H,
    property_H_tilde,
    smuljan_recursion,
)
from .measures import (
    SupportSet,
    abs_support,
    conv_square_root,
    is_nonneg,
    is_supported_nonneg,
    moments_of,
    mult_convolve,
    t_weight,
)
from .recursive import (
    Polynomial,
    RepeatedRootError,
    RootSet,
    characteristic_polynomial,
    detect_recursion,
    extend,
    extend_backward,
    recover_measure,
    roots,
)

__version__ = "0.1.0"
