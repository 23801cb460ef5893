"""Random KAT expressions for benchmarks and differential testing.

``random_expr`` spends an exact budget of connectives (sum, product,
star nodes); leaves are letters, primitive tests, negated tests or the
constant 1.  The constant 0 never appears: expressions denoting the
empty language make equivalence questions degenerate.

``saturate`` adds the full-alphabet loop (p1+...+pk)* to an expression.
Every guarded string matches that loop, so any two saturated
expressions are equivalent; checking such pairs forces equivalence
algorithms through their worst case instead of stopping at an early
counterexample.
"""

from __future__ import annotations

import random
from typing import Sequence

from .kat import KatExpr, KLetter, KProd, KStar, KSum, KTest, TConst, TNot, TVar


def random_leaf(rng: random.Random, tests: Sequence[str],
                letters: Sequence[str]) -> KatExpr:
    roll = rng.random()
    if roll < 0.5:
        return KLetter(rng.choice(letters))
    if roll < 0.75:
        return KTest(TVar(rng.choice(tests)))
    if roll < 0.875:
        return KTest(TNot(TVar(rng.choice(tests))))
    return KTest(TConst(True))


def random_expr(rng: random.Random, tests: Sequence[str],
                letters: Sequence[str], connectives: int) -> KatExpr:
    """An expression with exactly ``connectives`` internal operators,
    fully determined by the generator's state."""
    if connectives == 0:
        return random_leaf(rng, tests, letters)
    roll = rng.random()
    if roll < 0.2:
        return KStar(random_expr(rng, tests, letters, connectives - 1))
    left = rng.randint(0, connectives - 1)
    l = random_expr(rng, tests, letters, left)
    r = random_expr(rng, tests, letters, connectives - 1 - left)
    return KSum(l, r) if roll < 0.6 else KProd(l, r)


def count_connectives(k: KatExpr) -> int:
    if isinstance(k, (KSum, KProd)):
        return 1 + count_connectives(k.left) + count_connectives(k.right)
    if isinstance(k, KStar):
        return 1 + count_connectives(k.arg)
    return 0


def _test_contains_zero(t) -> bool:
    if isinstance(t, TConst):
        return not t.value
    if isinstance(t, TNot):
        return _test_contains_zero(t.arg)
    if isinstance(t, TVar):
        return False
    return _test_contains_zero(t.left) or _test_contains_zero(t.right)


def contains_zero(k: KatExpr) -> bool:
    if isinstance(k, KTest):
        return _test_contains_zero(k.test)
    if isinstance(k, (KSum, KProd)):
        return contains_zero(k.left) or contains_zero(k.right)
    if isinstance(k, KStar):
        return contains_zero(k.arg)
    return False


def full_alphabet_loop(letters: Sequence[str]) -> KatExpr:
    acc: KatExpr = KLetter(letters[0])
    for p in letters[1:]:
        acc = KSum(acc, KLetter(p))
    return KStar(acc)


def saturate(k: KatExpr, letters: Sequence[str]) -> KatExpr:
    """``k + (p1+...+pk)*``: equivalent to the full language whatever
    ``k`` is, so saturated pairs always compare equal."""
    return KSum(k, full_alphabet_loop(letters))
