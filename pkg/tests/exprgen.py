"""Seeded random generators shared by the test modules.

Everything is driven by an explicit random.Random so failures reproduce
from the seed alone.  The affine generator stays inside the decidable
fragment (measured leaves combined additively, scaled or divided only by
measurement-free subtrees); the any-fragment generator also emits
measured-by-measured products and quotients.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from enclosures import (
    Add,
    Dim,
    Div,
    Exact,
    Expr,
    FamilySpec,
    Interval,
    Meas,
    Mul,
    Neg,
    Sub,
    Token,
    TokenEnv,
    effective_intervals,
    evaluate,
    exact_value,
)

D = Dim("d")


def rand_rational(
    rng: random.Random, lo: int = -10, hi: int = 10, max_den: int = 8
) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_interval(rng: random.Random, lo: int = -10, hi: int = 10) -> Interval:
    a = rand_rational(rng, lo, hi)
    b = rand_rational(rng, lo, hi)
    return Interval(min(a, b), max(a, b))


def rand_nondegenerate_interval(rng: random.Random, lo: int = -10, hi: int = 10) -> Interval:
    while True:
        iv = rand_interval(rng, lo, hi)
        if iv.lo < iv.hi:
            return iv


def rand_positive_interval(rng: random.Random, hi: int = 10) -> Interval:
    # 0 < lo < hi, as the division family requires.
    while True:
        iv = rand_interval(rng, 1, hi)
        if 0 < iv.lo < iv.hi:
            return iv


def token_boxes(rng: random.Random, max_tokens: int = 4) -> dict[Token, Interval]:
    """One fixed interval per token so repeats never go infeasible."""
    count = rng.randint(1, max_tokens)
    return {Token(f"t{i + 1}"): rand_interval(rng) for i in range(count)}


def count_nodes(e: Expr) -> int:
    match e:
        case Exact() | Meas():
            return 1
        case Neg(operand):
            return 1 + count_nodes(operand)
        case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r):
            return 1 + count_nodes(l) + count_nodes(r)
    raise TypeError(f"not an expression node: {e!r}")


def gen_exact(rng: random.Random, budget: int) -> Expr:
    """Measurement-free expression with at most `budget` nodes."""
    if budget >= 3 and rng.random() < 0.6:
        op = rng.choice(("add", "sub", "mul", "div", "neg"))
        if op == "neg":
            return Neg(gen_exact(rng, budget - 1))
        left_budget = rng.randint(1, budget - 2)
        left = gen_exact(rng, left_budget)
        right = gen_exact(rng, budget - 1 - left_budget)
        ctor = {"add": Add, "sub": Sub, "mul": Mul, "div": Div}[op]
        return ctor(left, right)
    return Exact(rand_rational(rng), D)


def _leaf(rng: random.Random, boxes: dict[Token, Interval]) -> Expr:
    if boxes and rng.random() < 0.7:
        token = rng.choice(sorted(boxes, key=lambda t: t.name))
        return Meas(token, boxes[token], D)
    return Exact(rand_rational(rng), D)


def gen_affine(rng: random.Random, boxes: dict[Token, Interval], budget: int) -> Expr:
    """Affine-fragment expression with at most `budget` nodes."""
    if budget >= 3 and rng.random() < 0.75:
        op = rng.choice(("add", "sub", "neg", "mul", "div"))
        if op == "neg":
            return Neg(gen_affine(rng, boxes, budget - 1))
        if op in ("add", "sub"):
            left_budget = rng.randint(1, budget - 2)
            left = gen_affine(rng, boxes, left_budget)
            right = gen_affine(rng, boxes, budget - 1 - left_budget)
            return Add(left, right) if op == "add" else Sub(left, right)
        if op == "mul":
            scalar_budget = rng.randint(1, min(3, budget - 2))
            scalar = gen_exact(rng, scalar_budget)
            body = gen_affine(rng, boxes, budget - 1 - count_nodes(scalar))
            return Mul(scalar, body) if rng.random() < 0.5 else Mul(body, scalar)
        # division by an exact constant, occasionally by exact zero
        value = Fraction(0) if rng.random() < 0.1 else rand_rational(rng)
        return Div(gen_affine(rng, boxes, budget - 2), Exact(value, D))
    return _leaf(rng, boxes)


def gen_any(rng: random.Random, boxes: dict[Token, Interval], budget: int) -> Expr:
    """Full-grammar expression; products and quotients may be measured."""
    if budget >= 3 and rng.random() < 0.75:
        op = rng.choice(("add", "sub", "mul", "div", "neg"))
        if op == "neg":
            return Neg(gen_any(rng, boxes, budget - 1))
        left_budget = rng.randint(1, budget - 2)
        left = gen_any(rng, boxes, left_budget)
        right = gen_any(rng, boxes, budget - 1 - left_budget)
        ctor = {"add": Add, "sub": Sub, "mul": Mul, "div": Div}[op]
        return ctor(left, right)
    return _leaf(rng, boxes)


def equal_value_variant(rng: random.Random, e: Expr) -> Expr:
    """A measurement-free expression with the same exact value as e."""
    value = exact_value(e)
    zero = Exact(Fraction(0), D)
    one = Exact(Fraction(1), D)
    return rng.choice(
        (
            Add(e, zero),
            Sub(e, zero),
            Mul(one, e),
            Div(e, one),
            Neg(Neg(e)),
            Exact(value, D),
        )
    )


def rand_family_spec(rng: random.Random, family: str, mode: str) -> FamilySpec:
    if family == "background":
        return FamilySpec(
            family,
            mode,
            signal=rand_interval(rng),
            background=rand_nondegenerate_interval(rng),
        )
    if family == "division":
        return FamilySpec(family, mode, interval=rand_positive_interval(rng))
    return FamilySpec(family, mode, interval=rand_nondegenerate_interval(rng))


def corner_min_max(e: Expr) -> tuple[Fraction, Fraction]:
    """Brute-force oracle: evaluate on every corner of the effective boxes."""
    boxes = effective_intervals(e)
    tokens = sorted(boxes, key=lambda t: t.name)
    corners = [[boxes[t].lo, boxes[t].hi] for t in tokens]
    values = [
        evaluate(TokenEnv(dict(zip(tokens, combo))), e)
        for combo in itertools.product(*corners)
    ]
    return min(values), max(values)
