"""Token-erased expressions and their compositional interval semantics.

Erasing tokens keeps intervals, dimension tags, and tree shape but drops
observation identity, so repeated leaves are summarized independently.
The blind enclosure is plain interval arithmetic over the erased tree; it
is also exactly the over-approximation used for token-level expressions
(the dependency problem in its classic form).  The comparator at the
bottom packages the demonstration that this summary cannot recover the
token-sensitive rewrite class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from .expr import (
    UNBOUNDED,
    Add,
    Bounds,
    Dim,
    Div,
    Exact,
    Expr,
    Interval,
    Meas,
    Mul,
    Neg,
    Sub,
    Unbounded,
)

if TYPE_CHECKING:
    from .rewrite import Classification


@dataclass(frozen=True)
class BlindExact:
    value: Fraction
    dim: Dim


@dataclass(frozen=True)
class BlindMeas:
    """A measured leaf with its token forgotten."""

    interval: Interval
    dim: Dim


# Arithmetic nodes are shared with the token-level syntax; only the leaf
# constructors differ between the two trees.
BlindExpr = Union[BlindExact, BlindMeas, Add, Sub, Mul, Div, Neg]


def forget_tokens(e: Expr) -> BlindExpr:
    """Erase tokens from measured leaves; homomorphic everywhere else."""
    match e:
        case Exact(value, dim):
            return BlindExact(value, dim)
        case Meas(_, interval, dim):
            return BlindMeas(interval, dim)
        case Add(lhs, rhs):
            return Add(forget_tokens(lhs), forget_tokens(rhs))
        case Sub(lhs, rhs):
            return Sub(forget_tokens(lhs), forget_tokens(rhs))
        case Mul(lhs, rhs):
            return Mul(forget_tokens(lhs), forget_tokens(rhs))
        case Div(lhs, rhs):
            return Div(forget_tokens(lhs), forget_tokens(rhs))
        case Neg(operand):
            return Neg(forget_tokens(operand))
    raise TypeError(f"not an expression node: {e!r}")


# --- interval arithmetic on Bounds ------------------------------------------


def bounds_add(a: Bounds, b: Bounds) -> Bounds:
    if isinstance(a, Unbounded) or isinstance(b, Unbounded):
        return UNBOUNDED
    return Interval(a.lo + b.lo, a.hi + b.hi)


def bounds_sub(a: Bounds, b: Bounds) -> Bounds:
    if isinstance(a, Unbounded) or isinstance(b, Unbounded):
        return UNBOUNDED
    return Interval(a.lo - b.hi, a.hi - b.lo)


def bounds_neg(a: Bounds) -> Bounds:
    if isinstance(a, Unbounded):
        return UNBOUNDED
    return Interval(-a.hi, -a.lo)


def bounds_mul(a: Bounds, b: Bounds) -> Bounds:
    if isinstance(a, Unbounded) or isinstance(b, Unbounded):
        return UNBOUNDED
    products = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(min(products), max(products))


def bounds_div(a: Bounds, b: Bounds) -> Bounds:
    if isinstance(a, Unbounded) or isinstance(b, Unbounded):
        return UNBOUNDED
    if b.lo == 0 and b.hi == 0:
        # Total division: everything over exactly zero collapses to zero.
        return Interval.point(0)
    if b.lo <= 0 <= b.hi:
        # Denominator values arbitrarily close to zero: no finite bounds.
        return UNBOUNDED
    quotients = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    return Interval(min(quotients), max(quotients))


def blind_enclosure(b: BlindExpr) -> Bounds:
    """Compositional interval image of a token-erased expression.

    Exact leaves are singletons, measured leaves contribute their declared
    interval, and every occurrence is treated independently because no
    token identity survives erasure.
    """
    match b:
        case BlindExact(value, _):
            return Interval.point(value)
        case BlindMeas(interval, _):
            return interval
        case Add(lhs, rhs):
            return bounds_add(blind_enclosure(lhs), blind_enclosure(rhs))
        case Sub(lhs, rhs):
            return bounds_sub(blind_enclosure(lhs), blind_enclosure(rhs))
        case Mul(lhs, rhs):
            return bounds_mul(blind_enclosure(lhs), blind_enclosure(rhs))
        case Div(lhs, rhs):
            return bounds_div(blind_enclosure(lhs), blind_enclosure(rhs))
        case Neg(operand):
            return bounds_neg(blind_enclosure(operand))
    raise TypeError(f"not a blind expression node: {b!r}")


def format_blind(b: BlindExpr) -> str:
    """Render a token-erased tree; measured leaves print without a token."""
    return _fmt(b, 0)


def _fmt(b: BlindExpr, min_prec: int) -> str:
    match b:
        case BlindExact(value, dim):
            text, prec = f"exact({value},{dim})", 4
        case BlindMeas(interval, dim):
            text, prec = f"meas({interval},{dim})", 4
        case Add(lhs, rhs):
            text, prec = f"{_fmt(lhs, 1)} + {_fmt(rhs, 2)}", 1
        case Sub(lhs, rhs):
            text, prec = f"{_fmt(lhs, 1)} - {_fmt(rhs, 2)}", 1
        case Mul(lhs, rhs):
            text, prec = f"{_fmt(lhs, 2)} * {_fmt(rhs, 3)}", 2
        case Div(lhs, rhs):
            text, prec = f"{_fmt(lhs, 2)} / {_fmt(rhs, 3)}", 2
        case Neg(operand):
            text, prec = f"-{_fmt(operand, 3)}", 3
        case _:
            raise TypeError(f"not a blind expression node: {b!r}")
    return f"({text})" if prec < min_prec else text


# --- the blind-view comparator ------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    """Blind-view agreement versus token-sensitive classification.

    When `erased_equal` and `bounds_equal` hold while the two
    classifications differ, the pair witnesses that interval bounds,
    dimension tags, and erased syntax together underdetermine the rewrite
    class.
    """

    expr1: Expr
    expr2: Expr
    target: Expr | None
    blind1: BlindExpr
    blind2: BlindExpr
    erased_equal: bool
    bounds1: Bounds
    bounds2: Bounds
    bounds_equal: bool
    class1: "Classification"
    class2: "Classification"

    @property
    def classes_differ(self) -> bool:
        return self.class1.kind != self.class2.kind

    @property
    def demonstrates_insufficiency(self) -> bool:
        return self.erased_equal and self.bounds_equal and self.classes_differ


def blind_compare(
    e1: Expr,
    e2: Expr,
    target: Expr | None = None,
    *,
    grid_points: int | None = None,
    budget: int | None = None,
) -> ComparisonReport:
    """Compare two expressions through their token-erased summaries.

    Classifies each expression against `target` when given, otherwise the
    two expressions against each other.
    """
    # Imported here: rewrite classification sits above this module.
    from .rewrite import classify

    kwargs = {}
    if grid_points is not None:
        kwargs["grid_points"] = grid_points
    if budget is not None:
        kwargs["budget"] = budget

    blind1 = forget_tokens(e1)
    blind2 = forget_tokens(e2)
    bounds1 = blind_enclosure(blind1)
    bounds2 = blind_enclosure(blind2)
    if target is not None:
        class1 = classify(e1, target, **kwargs)
        class2 = classify(e2, target, **kwargs)
    else:
        class1 = classify(e1, e2, **kwargs)
        class2 = classify(e2, e1, **kwargs)
    return ComparisonReport(
        expr1=e1,
        expr2=e2,
        target=target,
        blind1=blind1,
        blind2=blind2,
        erased_equal=blind1 == blind2,
        bounds1=bounds1,
        bounds2=bounds2,
        bounds_equal=bounds1 == bounds2,
        class1=class1,
        class2=class2,
    )
