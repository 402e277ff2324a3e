"""Exact epsilon factors for simple cuspidal GL(n, F) representations,
F = F_q((t)), with brute-force verifiers for the converse theorem, field
separation, twisting stability and matrix Gauss-sum identities."""

from __future__ import annotations

from .characters import (
    AddChar,
    MultChar,
    base_change,
    iter_level_chars,
    make_char,
    restrict_to_base,
    tame_char,
)
from .cyclo import CycNum, QHalfExt, RootOfUnity
from .epsilon import (
    EpsilonFactor,
    eps_character,
    eps_det_twist,
    eps_equal,
    eps_simple_cuspidal,
    gauss_sum_tate,
)
from .errors import (
    BudgetExceededError,
    NotInvertibleError,
    PrecisionError,
    PreconditionError,
    ScopeError,
)
from .hereditary import (
    HereditaryOrder,
    make_order,
    matrix_gauss_full,
    matrix_gauss_reduced,
    verify_gauss_identity,
)
from .localfield import (
    FieldParams,
    LaurentTrunc,
    TameExt,
    base_field,
    make_extension,
    make_field,
    norm,
    trace,
)
from .pairs import (
    AdmissiblePair,
    FieldIso,
    are_isomorphic,
    enumerate_pairs,
    make_pair,
    twist_pair,
)
from .verify import (
    Fingerprint,
    VerifyReport,
    converse_check,
    field_separation_check,
    fingerprint,
    stability_check,
    stability_sweep,
)

__all__ = [
    "AddChar", "AdmissiblePair", "BudgetExceededError", "CycNum", "EpsilonFactor",
    "FieldIso", "FieldParams", "Fingerprint", "HereditaryOrder", "LaurentTrunc",
    "MultChar", "NotInvertibleError", "PrecisionError", "PreconditionError",
    "QHalfExt", "RootOfUnity", "ScopeError", "TameExt", "VerifyReport",
    "are_isomorphic", "base_change", "base_field", "converse_check",
    "enumerate_pairs", "eps_character", "eps_det_twist", "eps_equal",
    "eps_simple_cuspidal", "field_separation_check", "fingerprint",
    "gauss_sum_tate", "iter_level_chars", "make_char", "make_extension",
    "make_field", "make_order", "make_pair", "matrix_gauss_full",
    "matrix_gauss_reduced", "norm", "restrict_to_base", "stability_check",
    "stability_sweep", "tame_char", "trace", "twist_pair", "verify_gauss_identity",
]
