"""Word algebra, embedded web data and numerics for hyperlogarithms."""

from .dp4 import (
    DP4Data,
    ResidueMismatch,
    SymbolicIdentityViolation,
    conic_alignment,
    dp4_data,
    dp4_residue_check,
    dp4_symbolic_identity,
)
from .numeric import (
    LogFormBasis,
    NumericReport,
    PathEvaluation,
    PathTooClose,
    QuadratureFailure,
    ai3_cross_check,
    bol_alignment,
    evaluate_words,
    verify_identity_numeric,
)
from .words import (
    IdentityReport,
    WordCombination,
    apply_linear,
    asym,
    shuffle,
    shuffle_combinations,
    sym,
    verify_asym_shuffle_identities,
    word,
)

__all__ = [
    "DP4Data",
    "IdentityReport",
    "LogFormBasis",
    "NumericReport",
    "PathEvaluation",
    "PathTooClose",
    "QuadratureFailure",
    "ResidueMismatch",
    "SymbolicIdentityViolation",
    "WordCombination",
    "ai3_cross_check",
    "apply_linear",
    "asym",
    "bol_alignment",
    "conic_alignment",
    "dp4_data",
    "dp4_residue_check",
    "dp4_symbolic_identity",
    "evaluate_words",
    "shuffle",
    "shuffle_combinations",
    "sym",
    "verify_asym_shuffle_identities",
    "verify_identity_numeric",
    "word",
]
