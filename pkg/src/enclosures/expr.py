"""Core syntax: observation tokens, dimension tags, intervals, and the AST.

A measured leaf carries three things: an observation token naming the
measurement event, a closed rational interval of values the hidden exact
reading may take, and a dimension tag.  Token identity is semantic: two
leaves with the same token denote the same hidden value, while two leaves
with distinct tokens may vary independently even when their intervals and
tags coincide.  Dimension tags are carried along by the syntax but never
consulted during evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


class IntervalOrderError(ValueError):
    """An interval literal has its lower endpoint above its upper one."""


class InfeasibleTokenError(Exception):
    """A token's declared intervals have empty intersection."""

    def __init__(self, token: "Token"):
        super().__init__(f"token {token.name!r} admits no consistent value")
        self.token = token


@dataclass(frozen=True)
class Token:
    """Opaque identity of one observation event; only equality matters."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Dim:
    """Dimension tag compared only syntactically; no units algebra."""

    tag: str

    def __str__(self) -> str:
        return self.tag


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]; nonempty by construction."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise IntervalOrderError(f"interval [{self.lo},{self.hi}] has lo > hi")

    @classmethod
    def of(cls, lo, hi) -> "Interval":
        """Build from anything Fraction accepts (ints, strings, Fractions)."""
        return cls(Fraction(lo), Fraction(hi))

    @classmethod
    def point(cls, q) -> "Interval":
        q = Fraction(q)
        return cls(q, q)

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def intersect(self, other: "Interval") -> Union["Interval", None]:
        """Intersection, or None when the intervals are disjoint."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class Unbounded:
    """Singleton marker for an enclosure with no finite bounds."""

    _instance = None

    def __new__(cls) -> "Unbounded":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"


UNBOUNDED = Unbounded()

# Either finite closed bounds or no bounds at all.
Bounds = Union[Interval, Unbounded]


# --- expression AST ---------------------------------------------------------
#
# The arithmetic nodes are shared with the token-erased syntax in
# enclosures.blind: only the leaf constructors differ between the two
# languages, and the erasure map is a homomorphism on the node classes.


@dataclass(frozen=True)
class Exact:
    """Exact rational constant with a dimension tag."""

    value: Fraction
    dim: Dim


@dataclass(frozen=True)
class Meas:
    """One measurement: token identity, declared interval, dimension tag."""

    token: Token
    interval: Interval
    dim: Dim


@dataclass(frozen=True)
class Add:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Sub:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Mul:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Div:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[Exact, Meas, Add, Sub, Mul, Div, Neg]


def meas_leaves(e: Expr) -> Iterator[Meas]:
    """Yield every measured leaf in left-to-right syntactic order."""
    match e:
        case Meas():
            yield e
        case Exact():
            return
        case Add(lhs, rhs) | Sub(lhs, rhs) | Mul(lhs, rhs) | Div(lhs, rhs):
            yield from meas_leaves(lhs)
            yield from meas_leaves(rhs)
        case Neg(operand):
            yield from meas_leaves(operand)


def is_exact(e: Expr) -> bool:
    """True iff no measured leaf occurs; exactness is purely syntactic."""
    return next(meas_leaves(e), None) is None


def tokens_of(e: Expr) -> set[Token]:
    return {leaf.token for leaf in meas_leaves(e)}


def dims_of(e: Expr) -> set[Dim]:
    out: set[Dim] = set()
    match e:
        case Exact(_, dim) | Meas(_, _, dim):
            out.add(dim)
        case Add(lhs, rhs) | Sub(lhs, rhs) | Mul(lhs, rhs) | Div(lhs, rhs):
            out |= dims_of(lhs)
            out |= dims_of(rhs)
        case Neg(operand):
            out |= dims_of(operand)
    return out


def effective_intervals(e: Expr) -> dict[Token, Interval]:
    """Per-token intersection of all intervals declared at its occurrences.

    A token measured twice under different intervals is constrained by both,
    so its feasible values form the intersection.  Raises
    InfeasibleTokenError when some token's intersection is empty, which is
    exactly the case where the whole expression has an empty enclosure.
    Exact leaves and dimension tags play no part.
    """
    out: dict[Token, Interval] = {}
    for leaf in meas_leaves(e):
        seen = out.get(leaf.token)
        merged = leaf.interval if seen is None else seen.intersect(leaf.interval)
        if merged is None:
            raise InfeasibleTokenError(leaf.token)
        out[leaf.token] = merged
    return out


# --- canonical printing -----------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_LEAF = 4


def format_expr(e: Expr) -> str:
    """Canonical text; parsing the result reproduces the tree exactly."""
    return _fmt(e, 0)


def _fmt(e: Expr, min_prec: int) -> str:
    match e:
        case Exact(value, dim):
            text, prec = f"exact({value},{dim})", _PREC_LEAF
        case Meas(token, interval, dim):
            text, prec = f"meas({token},{interval},{dim})", _PREC_LEAF
        case Add(lhs, rhs):
            text = f"{_fmt(lhs, _PREC_ADD)} + {_fmt(rhs, _PREC_ADD + 1)}"
            prec = _PREC_ADD
        case Sub(lhs, rhs):
            text = f"{_fmt(lhs, _PREC_ADD)} - {_fmt(rhs, _PREC_ADD + 1)}"
            prec = _PREC_ADD
        case Mul(lhs, rhs):
            text = f"{_fmt(lhs, _PREC_MUL)} * {_fmt(rhs, _PREC_MUL + 1)}"
            prec = _PREC_MUL
        case Div(lhs, rhs):
            text = f"{_fmt(lhs, _PREC_MUL)} / {_fmt(rhs, _PREC_MUL + 1)}"
            prec = _PREC_MUL
        case Neg(operand):
            text, prec = f"-{_fmt(operand, _PREC_NEG)}", _PREC_NEG
        case _:
            raise TypeError(f"not an expression node: {e!r}")
    if prec < min_prec:
        return f"({text})"
    return text
