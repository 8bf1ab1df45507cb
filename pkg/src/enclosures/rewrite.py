"""Three-valued rewrite classification with machine-checkable evidence.

A rewrite from src to tgt is licensed when every value warranted for tgt
is already warranted for src (the target makes the tighter claim).  The
decision ladder below settles containment wherever a certificate exists
in either direction and answers Undecided otherwise; it never guesses.
Verdicts carry witness environments or exclusion certificates that can
be re-validated from scratch, which the audit helpers at the bottom do.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Union

from .enclosure import (
    DEFAULT_ENV_BUDGET,
    DEFAULT_GRID_POINTS,
    EmptySet,
    EnclosureOutcome,
    ExactInterval,
    ExclusionCertificate,
    Member,
    NonMember,
    Unknown,
    affine_witness,
    enclosure,
    membership,
    over_approx,
)
from .expr import Expr, Interval, is_exact
from .semantics import TokenEnv, evaluate, exact_value, token_consistent


class PreconditionViolated(ValueError):
    """An operation was called outside its stated precondition."""


# --- evidence carried by Holds -----------------------------------------------


@dataclass(frozen=True)
class SameExpression:
    """src and tgt are the same tree; containment is reflexive."""


@dataclass(frozen=True)
class EmptyTarget:
    """tgt's enclosure is empty, so it is contained in anything."""

    token_name: str


@dataclass(frozen=True)
class IntervalContainment:
    """tgt's certified bound sits inside src's exact interval.

    target_kind says what the bound certifies: "exact-interval" means
    tgt's enclosure equals `target`, "over-approx" means it is merely
    contained in `target` (still enough for the containment claim).
    A witness environment is attached when the target is a single point.
    """

    source: Interval
    target: Interval
    target_kind: str
    witness: TokenEnv | None = None
    witness_value: Fraction | None = None


@dataclass(frozen=True)
class MembershipWitness:
    """tgt's enclosure is the single value; env makes src attain it."""

    env: TokenEnv
    value: Fraction


HoldsEvidence = Union[SameExpression, EmptyTarget, IntervalContainment, MembershipWitness]


# --- three-valued verdicts ---------------------------------------------------


@dataclass(frozen=True)
class Holds:
    evidence: HoldsEvidence


@dataclass(frozen=True)
class Fails:
    """env is consistent with tgt, evaluates it to value, and the
    certificate shows value is outside src's enclosure."""

    env: TokenEnv
    value: Fraction
    certificate: ExclusionCertificate


@dataclass(frozen=True)
class Undecided:
    """Neither direction of the containment could be certified."""

    source_outcome: EnclosureOutcome
    target_outcome: EnclosureOutcome


Verdict = Union[Holds, Fails, Undecided]


class RewriteClass(Enum):
    INTERCHANGEABLE = "interchangeable"
    ONE_WAY_ONLY_FORWARD = "one-way-only-forward"
    ONE_WAY_ONLY_BACKWARD = "one-way-only-backward"
    INCOMPARABLE = "incomparable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Classification:
    kind: RewriteClass
    forward: Verdict
    backward: Verdict


# --- the containment decision ladder -----------------------------------------


def licensed(
    src: Expr,
    tgt: Expr,
    grid_points: int = DEFAULT_GRID_POINTS,
    budget: int = DEFAULT_ENV_BUDGET,
) -> Verdict:
    """Decide whether every value warranted for tgt is warranted for src."""
    if src == tgt:
        return Holds(SameExpression())

    enc_tgt = enclosure(tgt, grid_points, budget)
    if isinstance(enc_tgt, EmptySet):
        return Holds(EmptyTarget(enc_tgt.token.name))
    enc_src = enclosure(src, grid_points, budget)

    if isinstance(enc_src, EmptySet):
        # Nothing is warranted for src; any tgt value refutes containment.
        for env, value in _target_members(tgt, enc_tgt):
            return Fails(env, value, ExclusionCertificate("empty"))
        return Undecided(enc_src, enc_tgt)

    if isinstance(enc_src, ExactInterval) and isinstance(enc_tgt, ExactInterval):
        si, ti = enc_src.interval, enc_tgt.interval
        if si.encloses(ti):
            witness = None
            value = None
            if ti.is_point:
                witness = affine_witness(src, ti.lo)
                value = ti.lo if witness is not None else None
            return Holds(IntervalContainment(si, ti, "exact-interval", witness, value))
        q = ti.hi if ti.hi > si.hi else ti.lo
        env = affine_witness(tgt, q)
        if env is not None:
            return Fails(env, q, ExclusionCertificate("exact-interval", si))
        return Undecided(enc_src, enc_tgt)

    if isinstance(enc_tgt, ExactInterval) and enc_tgt.interval.is_point:
        # Single-valued target: containment is exactly a membership query.
        q = enc_tgt.interval.lo
        found = membership(src, q, grid_points, budget)
        if isinstance(found, Member):
            return Holds(MembershipWitness(found.env, found.value))
        if isinstance(found, NonMember):
            env = affine_witness(tgt, q)
            if env is not None:
                return Fails(env, q, found.certificate)
        return Undecided(enc_src, enc_tgt)

    # Refutation: a tgt value certified outside src's bound, corners first.
    cert = _source_certificate(enc_src)
    if cert is not None:
        for env, value in _target_members(tgt, enc_tgt):
            if cert.excludes(value):
                return Fails(env, value, cert)

    # Confirmation without exactness on the target side.
    if isinstance(enc_src, ExactInterval):
        over_tgt = over_approx(tgt)
        if isinstance(over_tgt, Interval) and enc_src.interval.encloses(over_tgt):
            return Holds(
                IntervalContainment(enc_src.interval, over_tgt, "over-approx")
            )

    return Undecided(enc_src, enc_tgt)


def _source_certificate(enc_src: EnclosureOutcome) -> ExclusionCertificate | None:
    if isinstance(enc_src, ExactInterval):
        return ExclusionCertificate("exact-interval", enc_src.interval)
    if isinstance(enc_src, Unknown) and isinstance(enc_src.over, Interval):
        return ExclusionCertificate("over-approx", enc_src.over)
    return None


def _target_members(
    tgt: Expr, enc_tgt: EnclosureOutcome
) -> Iterator[tuple[TokenEnv, Fraction]]:
    """Warranted (env, value) pairs of the target, extremes first."""
    if isinstance(enc_tgt, ExactInterval):
        iv = enc_tgt.interval
        for q in [iv.hi] if iv.is_point else [iv.hi, iv.lo]:
            env = affine_witness(tgt, q)
            if env is not None:
                yield env, q
    elif isinstance(enc_tgt, Unknown):
        yield from enc_tgt.under


# --- classification ----------------------------------------------------------


def classify(
    src: Expr,
    tgt: Expr,
    grid_points: int = DEFAULT_GRID_POINTS,
    budget: int = DEFAULT_ENV_BUDGET,
) -> Classification:
    """Combine both containment directions into a rewrite class."""
    forward = licensed(src, tgt, grid_points, budget)
    backward = licensed(tgt, src, grid_points, budget)
    match forward, backward:
        case Holds(), Holds():
            kind = RewriteClass.INTERCHANGEABLE
        case Holds(), Fails():
            kind = RewriteClass.ONE_WAY_ONLY_FORWARD
        case Fails(), Holds():
            kind = RewriteClass.ONE_WAY_ONLY_BACKWARD
        case Fails(), Fails():
            kind = RewriteClass.INCOMPARABLE
        case _:
            kind = RewriteClass.UNDETERMINED
    return Classification(kind, forward, backward)


def check_conservativity(e: Expr, e2: Expr) -> bool:
    """Self-test predicate for measurement-free pairs.

    Two exact expressions must classify as Interchangeable exactly when
    their values coincide and Incomparable otherwise; a one-way class
    between them would be a soundness bug.
    """
    if not (is_exact(e) and is_exact(e2)):
        raise PreconditionViolated("both expressions must be measurement-free")
    expected = (
        RewriteClass.INTERCHANGEABLE
        if exact_value(e) == exact_value(e2)
        else RewriteClass.INCOMPARABLE
    )
    return classify(e, e2).kind is expected


# --- evidence re-validation --------------------------------------------------


def audit_verdict(verdict: Verdict, src: Expr, tgt: Expr) -> bool:
    """Re-derive every claim a verdict makes, from the expressions alone."""
    match verdict:
        case Holds(SameExpression()):
            return src == tgt
        case Holds(EmptyTarget(token_name)):
            enc = enclosure(tgt)
            return isinstance(enc, EmptySet) and enc.token.name == token_name
        case Holds(IntervalContainment(source, target, target_kind, witness, value)):
            enc_src = enclosure(src)
            if not isinstance(enc_src, ExactInterval) or enc_src.interval != source:
                return False
            if target_kind == "exact-interval":
                enc_tgt = enclosure(tgt)
                if not isinstance(enc_tgt, ExactInterval) or enc_tgt.interval != target:
                    return False
            elif target_kind == "over-approx":
                if over_approx(tgt) != target:
                    return False
            else:
                return False
            if not source.encloses(target):
                return False
            if witness is None:
                return True
            return (
                value is not None
                and token_consistent(witness, src)
                and evaluate(witness, src) == value
                and target.contains(value)
            )
        case Holds(MembershipWitness(env, value)):
            enc_tgt = enclosure(tgt)
            return (
                isinstance(enc_tgt, ExactInterval)
                and enc_tgt.interval == Interval.point(value)
                and token_consistent(env, src)
                and evaluate(env, src) == value
            )
        case Fails(env, value, certificate):
            if not (token_consistent(env, tgt) and evaluate(env, tgt) == value):
                return False
            if not certificate.excludes(value):
                return False
            if certificate.kind == "empty":
                return isinstance(enclosure(src), EmptySet)
            if certificate.kind == "exact-interval":
                enc_src = enclosure(src)
                return (
                    isinstance(enc_src, ExactInterval)
                    and enc_src.interval == certificate.bounds
                )
            if certificate.kind == "over-approx":
                return over_approx(src) == certificate.bounds
            return False
        case Undecided():
            return True
    return False


def audit_classification(cls: Classification, src: Expr, tgt: Expr) -> bool:
    """Check both directional verdicts; the backward one swaps the roles."""
    return audit_verdict(cls.forward, src, tgt) and audit_verdict(
        cls.backward, tgt, src
    )
