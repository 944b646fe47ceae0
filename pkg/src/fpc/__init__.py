"""Frameproof-code toolkit: construction, exact verification, and bounds."""

from .core import (
    BudgetExceededError,
    Code,
    Verdict,
    Witness,
    desc_contains,
    desc_size,
    is_cover_free,
    is_frameproof,
    own_profile,
    pi,
    pi_inverse,
)
from .extremal import (
    BoundsReport,
    EmcValue,
    PositionFamily,
    blackburn_upper,
    bounds_report,
    emc_families,
    emc_value,
    improved_threshold,
    improved_upper,
    lambda_of,
    m_exact,
    matching_number,
    rate_limit,
)
from .packing import (
    Candidate,
    DegreeDiagnostics,
    SparsifierConfig,
    TransversalPacking,
    accept_candidate,
    degree_diagnostics,
    greedy_matching,
    greedy_packing,
    r_membership,
    rs_packing,
    survived_set,
    validate_induced,
    validate_packing,
)
from .construct import (
    ConstructionConfig,
    ConstructionError,
    ConstructionReport,
    build_extremal_complement,
    construct,
    own_subsequence_audit,
    search_max,
    trivial_code,
)

__all__ = [
    "BoundsReport",
    "BudgetExceededError",
    "Candidate",
    "Code",
    "ConstructionConfig",
    "ConstructionError",
    "ConstructionReport",
    "DegreeDiagnostics",
    "EmcValue",
    "PositionFamily",
    "SparsifierConfig",
    "TransversalPacking",
    "Verdict",
    "Witness",
    "accept_candidate",
    "blackburn_upper",
    "bounds_report",
    "build_extremal_complement",
    "construct",
    "degree_diagnostics",
    "desc_contains",
    "desc_size",
    "emc_families",
    "emc_value",
    "greedy_matching",
    "greedy_packing",
    "improved_threshold",
    "improved_upper",
    "is_cover_free",
    "is_frameproof",
    "lambda_of",
    "m_exact",
    "matching_number",
    "own_profile",
    "own_subsequence_audit",
    "pi",
    "pi_inverse",
    "r_membership",
    "rate_limit",
    "rs_packing",
    "search_max",
    "survived_set",
    "trivial_code",
    "validate_induced",
    "validate_packing",
]
