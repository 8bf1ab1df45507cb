"""Token-sensitive interval enclosures for measurement-bearing arithmetic.

Measured leaves carry an observation token, an interval of possible
hidden values, and a dimension tag.  Occurrences sharing a token share
one hidden value, so the set of attainable results (the warranted
enclosure) can be far tighter than plain interval arithmetic suggests.
The package computes enclosures exactly on the affine fragment, bounds
them elsewhere, classifies rewrites by enclosure containment with
checkable evidence, and demonstrates why token-erased summaries cannot
recover those classifications.
"""

from .blind import (
    BlindExact,
    BlindExpr,
    BlindMeas,
    ComparisonReport,
    blind_compare,
    blind_enclosure,
    forget_tokens,
    format_blind,
)
from .enclosure import (
    DEFAULT_ENV_BUDGET,
    DEFAULT_GRID_POINTS,
    AffineForm,
    BudgetExceededError,
    EmptySet,
    EnclosureOutcome,
    ExactInterval,
    ExclusionCertificate,
    Inconclusive,
    Member,
    MembershipResult,
    NonMember,
    NotAffineError,
    Unknown,
    affine_enclosure,
    affine_witness,
    enclosure,
    grid_values,
    membership,
    over_approx,
    to_affine,
    under_approx_samples,
)
from .expr import (
    UNBOUNDED,
    Add,
    Bounds,
    Dim,
    Div,
    Exact,
    Expr,
    InfeasibleTokenError,
    Interval,
    IntervalOrderError,
    Meas,
    Mul,
    Neg,
    Sub,
    Token,
    Unbounded,
    dims_of,
    effective_intervals,
    format_expr,
    is_exact,
    meas_leaves,
    tokens_of,
)
from .families import (
    FAMILIES,
    MODES,
    FamilySpec,
    FamilySpecError,
    build_pair,
    build_variants,
    expected_class,
    source_expr,
    target_expr,
)
from .parser import ParseError, parse, parse_interval, parse_rational
from .rewrite import (
    Classification,
    EmptyTarget,
    Fails,
    Holds,
    HoldsEvidence,
    IntervalContainment,
    MembershipWitness,
    PreconditionViolated,
    RewriteClass,
    SameExpression,
    Undecided,
    Verdict,
    audit_classification,
    audit_verdict,
    check_conservativity,
    classify,
    licensed,
)
from .semantics import (
    EMPTY_ENV,
    NotExactError,
    TokenEnv,
    evaluate,
    exact_value,
    parse_env,
    token_consistent,
)

__version__ = "0.1.0"

__all__ = [
    "Add",
    "AffineForm",
    "BlindExact",
    "BlindExpr",
    "BlindMeas",
    "Bounds",
    "BudgetExceededError",
    "Classification",
    "ComparisonReport",
    "DEFAULT_ENV_BUDGET",
    "DEFAULT_GRID_POINTS",
    "Dim",
    "Div",
    "EMPTY_ENV",
    "EmptySet",
    "EmptyTarget",
    "EnclosureOutcome",
    "Exact",
    "ExactInterval",
    "ExclusionCertificate",
    "Expr",
    "FAMILIES",
    "Fails",
    "FamilySpec",
    "FamilySpecError",
    "Holds",
    "HoldsEvidence",
    "Inconclusive",
    "InfeasibleTokenError",
    "Interval",
    "IntervalContainment",
    "IntervalOrderError",
    "MODES",
    "Meas",
    "Member",
    "MembershipResult",
    "MembershipWitness",
    "Mul",
    "Neg",
    "NonMember",
    "NotAffineError",
    "NotExactError",
    "ParseError",
    "PreconditionViolated",
    "RewriteClass",
    "SameExpression",
    "Sub",
    "Token",
    "TokenEnv",
    "UNBOUNDED",
    "Unbounded",
    "Undecided",
    "Unknown",
    "Verdict",
    "affine_enclosure",
    "affine_witness",
    "audit_classification",
    "audit_verdict",
    "blind_compare",
    "blind_enclosure",
    "build_pair",
    "build_variants",
    "check_conservativity",
    "classify",
    "dims_of",
    "effective_intervals",
    "enclosure",
    "evaluate",
    "exact_value",
    "expected_class",
    "forget_tokens",
    "format_blind",
    "format_expr",
    "grid_values",
    "is_exact",
    "licensed",
    "meas_leaves",
    "membership",
    "over_approx",
    "parse",
    "parse_env",
    "parse_interval",
    "parse_rational",
    "source_expr",
    "target_expr",
    "to_affine",
    "token_consistent",
    "tokens_of",
    "under_approx_samples",
    "__version__",
]
