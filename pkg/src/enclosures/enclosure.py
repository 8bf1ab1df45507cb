"""Warranted enclosures: exact on the affine fragment, bounded elsewhere.

The affine fragment (sums, differences, negation, scaling by exact
subexpressions) reduces to a linear form over tokens, whose image on a
box of rationals is a closed interval that is attained pointwise by
convex combination.  Outside the fragment we never claim exactness: the
outcome pairs sampled under-approximation witnesses with a compositional
over-approximation, and stays honest about the gap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Mapping, Union

from .blind import blind_enclosure, forget_tokens
from .expr import (
    Add,
    Bounds,
    Div,
    Exact,
    Expr,
    InfeasibleTokenError,
    Interval,
    Meas,
    Mul,
    Neg,
    Sub,
    Token,
    Unbounded,
    effective_intervals,
    is_exact,
    tokens_of,
)
from .semantics import TokenEnv, evaluate, exact_value, token_consistent

DEFAULT_GRID_POINTS = 5
DEFAULT_ENV_BUDGET = 100_000


class NotAffineError(Exception):
    """The expression leaves the affine fragment."""


class BudgetExceededError(Exception):
    """Grid enumeration would exceed the environment cap.

    Carries the partial sample list collected before the cap so callers
    can still report what was seen.
    """

    def __init__(
        self,
        required: int,
        budget: int,
        partial: list[tuple[TokenEnv, Fraction]],
    ):
        super().__init__(f"grid needs {required} environments, budget is {budget}")
        self.required = required
        self.budget = budget
        self.partial = partial


@dataclass(frozen=True)
class AffineForm:
    """constant + sum of coeffs[t] * env(t), with env ranging over the boxes.

    Every token appearing in the source expression keeps an entry, even
    with coefficient 0, so witness environments cover all tokens.  Boxes
    are the effective intervals of the source expression.
    """

    constant: Fraction
    coeffs: Mapping[Token, Fraction]
    boxes: Mapping[Token, Interval]


# --- enclosure outcomes ------------------------------------------------------


@dataclass(frozen=True)
class EmptySet:
    """No token-consistent environment exists; the enclosure is empty."""

    token: Token


@dataclass(frozen=True)
class ExactInterval:
    """The enclosure is exactly this interval: every rational in it is attained."""

    interval: Interval


@dataclass(frozen=True)
class Unknown:
    """Certified sandwich for a non-affine expression.

    Every under sample is a consistent environment with its value; the
    enclosure is contained in `over`.  `truncated` marks samples cut off
    by the enumeration budget.
    """

    under: tuple[tuple[TokenEnv, Fraction], ...]
    over: Bounds
    truncated: bool = False


EnclosureOutcome = Union[EmptySet, ExactInterval, Unbounded, Unknown]


# --- the affine fragment -----------------------------------------------------


def to_affine(e: Expr) -> AffineForm:
    """Reduce e to a linear form over its tokens, or raise NotAffineError.

    Fully exact subtrees fold to constants, so any Mul or Div with an
    exact side stays inside the fragment.  Division by an exact zero
    folds the whole quotient to 0 (total division).  A quotient whose
    numerator and denominator are the same subtree folds to 1 when the
    shared value provably avoids 0 over the boxes, and to 0 when it is
    identically 0; this keeps provably-constant self-divisions decidable.
    Raises InfeasibleTokenError when some token has no possible value.
    """
    boxes = effective_intervals(e)
    constant, coeffs = _affine_parts(e, boxes)
    return AffineForm(constant, coeffs, boxes)


def _affine_parts(
    e: Expr, boxes: Mapping[Token, Interval]
) -> tuple[Fraction, dict[Token, Fraction]]:
    match e:
        case Exact(value, _):
            return value, {}
        case Meas(token, _, _):
            return Fraction(0), {token: Fraction(1)}
        case Add(lhs, rhs):
            cl, kl = _affine_parts(lhs, boxes)
            cr, kr = _affine_parts(rhs, boxes)
            return cl + cr, _merge(kl, kr, Fraction(1))
        case Sub(lhs, rhs):
            cl, kl = _affine_parts(lhs, boxes)
            cr, kr = _affine_parts(rhs, boxes)
            return cl - cr, _merge(kl, kr, Fraction(-1))
        case Neg(operand):
            c, k = _affine_parts(operand, boxes)
            return -c, {t: -v for t, v in k.items()}
        case Mul(lhs, rhs):
            if is_exact(lhs):
                scale = exact_value(lhs)
                c, k = _affine_parts(rhs, boxes)
            elif is_exact(rhs):
                scale = exact_value(rhs)
                c, k = _affine_parts(lhs, boxes)
            else:
                raise NotAffineError("product of two measured subexpressions")
            return scale * c, {t: scale * v for t, v in k.items()}
        case Div(lhs, rhs):
            if is_exact(rhs):
                divisor = exact_value(rhs)
                if divisor == 0:
                    # x / 0 = 0 for every x; no need to reduce the numerator.
                    return Fraction(0), _zero_coeffs(tokens_of(lhs))
                c, k = _affine_parts(lhs, boxes)
                return c / divisor, {t: v / divisor for t, v in k.items()}
            if lhs == rhs:
                # Same subtree above and below: the quotient is 1 wherever
                # the shared value is nonzero and 0 where it is zero.
                c, k = _affine_parts(lhs, boxes)
                lo, hi = _linear_bounds(c, k, boxes)
                if lo > 0 or hi < 0:
                    return Fraction(1), _zero_coeffs(k)
                if lo == 0 and hi == 0:
                    return Fraction(0), _zero_coeffs(k)
                raise NotAffineError(
                    "self-quotient can take both 0 and 1 over the boxes"
                )
            raise NotAffineError("measured denominator")
    raise TypeError(f"not an expression node: {e!r}")


def _merge(
    a: dict[Token, Fraction], b: dict[Token, Fraction], sign: Fraction
) -> dict[Token, Fraction]:
    out = dict(a)
    for t, v in b.items():
        out[t] = out.get(t, Fraction(0)) + sign * v
    return out


def _zero_coeffs(tokens) -> dict[Token, Fraction]:
    return {t: Fraction(0) for t in tokens}


def _linear_bounds(
    constant: Fraction,
    coeffs: Mapping[Token, Fraction],
    boxes: Mapping[Token, Interval],
) -> tuple[Fraction, Fraction]:
    lo = constant
    hi = constant
    for t, c in coeffs.items():
        box = boxes[t]
        lo += min(c * box.lo, c * box.hi)
        hi += max(c * box.lo, c * box.hi)
    return lo, hi


def affine_enclosure(f: AffineForm) -> EnclosureOutcome:
    """Exact interval image of a linear form on its boxes.

    Every rational in the result is attained: pick the two extremal
    environments and take the rational convex combination.
    """
    lo, hi = _linear_bounds(f.constant, f.coeffs, f.boxes)
    return ExactInterval(Interval(lo, hi))


def _extremal_env(f: AffineForm, *, high: bool) -> TokenEnv:
    values = {}
    for t, box in f.boxes.items():
        c = f.coeffs.get(t, Fraction(0))
        if c == 0:
            values[t] = box.lo
        elif (c > 0) == high:
            values[t] = box.hi
        else:
            values[t] = box.lo
    return TokenEnv(values)


def affine_witness(e: Expr, q: Fraction, form: AffineForm | None = None) -> TokenEnv | None:
    """Consistent environment making the affine expression e evaluate to q.

    Interpolates between the two extremal environments; returns None when
    q is outside the exact interval.  The returned environment is checked
    against the original expression before being handed out.
    """
    f = to_affine(e) if form is None else form
    lo, hi = _linear_bounds(f.constant, f.coeffs, f.boxes)
    if q < lo or q > hi:
        return None
    env_lo = _extremal_env(f, high=False)
    if lo == hi:
        env = env_lo
    else:
        env_hi = _extremal_env(f, high=True)
        lam = (q - lo) / (hi - lo)
        values = {
            t: (1 - lam) * env_lo.value(t) + lam * env_hi.value(t) for t in f.boxes
        }
        env = TokenEnv(values)
    if token_consistent(env, e) and evaluate(env, e) == q:
        return env
    return None


# --- sound over-approximation ------------------------------------------------


def over_approx(e: Expr) -> Bounds:
    """Interval bounds treating every measured occurrence independently.

    Identical to the token-erased enclosure by construction: widening the
    set of environments to occurrence-independent ones can only grow the
    image, so the result contains the warranted enclosure.
    """
    return blind_enclosure(forget_tokens(e))


# --- sampled under-approximation ---------------------------------------------


def grid_values(box: Interval, n: int) -> list[Fraction]:
    """Both endpoints plus n-2 evenly spaced interior rationals."""
    if n < 2:
        raise ValueError("grid needs at least 2 points per token")
    if box.lo == box.hi:
        return [box.lo]
    step = (box.hi - box.lo) / (n - 1)
    return [box.lo + k * step for k in range(n)]


def _corner_values(box: Interval) -> list[Fraction]:
    return [box.lo] if box.lo == box.hi else [box.lo, box.hi]


def _env_stream(
    tokens: list[Token],
    boxes: Mapping[Token, Interval],
    grid_points: int,
) -> Iterator[tuple[Fraction, ...]]:
    # Corner environments first: affine extremes live there, and the
    # refutation search in the classifier checks them before interiors.
    corner_lists = [_corner_values(boxes[t]) for t in tokens]
    corner_sets = [frozenset(c) for c in corner_lists]
    yield from itertools.product(*corner_lists)
    grid_lists = [grid_values(boxes[t], grid_points) for t in tokens]
    for combo in itertools.product(*grid_lists):
        if all(v in s for v, s in zip(combo, corner_sets)):
            continue  # already emitted in the corner pass
        yield combo


def under_approx_samples(
    e: Expr,
    grid_points: int = DEFAULT_GRID_POINTS,
    budget: int = DEFAULT_ENV_BUDGET,
) -> list[tuple[TokenEnv, Fraction]]:
    """Consistent (environment, value) pairs from a per-token grid.

    Returns [] when the expression admits no consistent environment.
    Raises BudgetExceededError (carrying the samples gathered so far)
    when the full grid would exceed the budget.
    """
    try:
        boxes = effective_intervals(e)
    except InfeasibleTokenError:
        return []
    tokens = sorted(boxes, key=lambda t: t.name)
    required = prod(len(grid_values(boxes[t], grid_points)) for t in tokens)
    samples: list[tuple[TokenEnv, Fraction]] = []
    for combo in _env_stream(tokens, boxes, grid_points):
        if len(samples) >= budget:
            raise BudgetExceededError(required, budget, samples)
        env = TokenEnv(dict(zip(tokens, combo)))
        if token_consistent(env, e):
            samples.append((env, evaluate(env, e)))
    return samples


# --- the enclosure entry point -----------------------------------------------


def enclosure(
    e: Expr,
    grid_points: int = DEFAULT_GRID_POINTS,
    budget: int = DEFAULT_ENV_BUDGET,
) -> EnclosureOutcome:
    """Warranted enclosure of e: exact when affine, a sandwich otherwise.

    Exactness is only ever claimed on the affine path; for anything else
    the under samples and over bounds may coincide in hull without the
    interior rationals being certified, so the outcome stays Unknown.
    """
    try:
        return affine_enclosure(to_affine(e))
    except InfeasibleTokenError as ex:
        return EmptySet(ex.token)
    except NotAffineError:
        pass
    over = over_approx(e)
    truncated = False
    try:
        under = under_approx_samples(e, grid_points, budget)
    except BudgetExceededError as ex:
        under = ex.partial
        truncated = True
    return Unknown(tuple(under), over, truncated)


# --- membership with certificates --------------------------------------------


@dataclass(frozen=True)
class ExclusionCertificate:
    """Machine-checkable reason a rational is outside an enclosure.

    kind "empty": the enclosure has no elements at all.
    kind "exact-interval": the enclosure is exactly `bounds`.
    kind "over-approx": the enclosure is contained in `bounds`.
    """

    kind: str
    bounds: Interval | None = None

    def excludes(self, q: Fraction) -> bool:
        if self.kind == "empty":
            return True
        return self.bounds is not None and not self.bounds.contains(q)


@dataclass(frozen=True)
class Member:
    """q is warranted: env is consistent and evaluates to it."""

    env: TokenEnv
    value: Fraction


@dataclass(frozen=True)
class NonMember:
    """q is certified outside the enclosure."""

    certificate: ExclusionCertificate


@dataclass(frozen=True)
class Inconclusive:
    """Neither a witness nor an exclusion certificate was found."""

    outcome: EnclosureOutcome


MembershipResult = Union[Member, NonMember, Inconclusive]


def membership(
    e: Expr,
    q: Fraction,
    grid_points: int = DEFAULT_GRID_POINTS,
    budget: int = DEFAULT_ENV_BUDGET,
) -> MembershipResult:
    """Decide whether q is a warranted value of e, where a certificate exists."""
    out = enclosure(e, grid_points, budget)
    match out:
        case EmptySet():
            return NonMember(ExclusionCertificate("empty"))
        case ExactInterval(interval):
            if not interval.contains(q):
                return NonMember(ExclusionCertificate("exact-interval", interval))
            env = affine_witness(e, q)
            if env is not None:
                return Member(env, q)
            return Inconclusive(out)
        case Unknown(under, over, _):
            for env, value in under:
                if value == q:
                    return Member(env, value)
            if isinstance(over, Interval) and not over.contains(q):
                return NonMember(ExclusionCertificate("over-approx", over))
            return Inconclusive(out)
    return Inconclusive(out)
