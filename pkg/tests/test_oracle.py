import random

import pytest

from katcheck.kat import (
    KatContext,
    KLetter,
    KProd,
    KStar,
    KSum,
    KTest,
    TConst,
    TVar,
    gs_member,
)
from katcheck.oracle import oracle_check, replay_guarded_string

from test_kat import random_kat_expr


@pytest.fixture
def ctx():
    return KatContext(["a", "b"], ["p", "q"])


def test_reflexive(ctx):
    k = KProd(KTest(TVar("a")), KStar(KLetter("p")))
    assert oracle_check(ctx, k, k) == (True, None)


def test_zero_is_a_unit(ctx):
    p = KLetter("p")
    assert oracle_check(ctx, KSum(p, KTest(TConst(False))), p)[0]


def test_distinguishes_letters(ctx):
    holds, u = oracle_check(ctx, KProd(KTest(TVar("a")), KLetter("p")),
                            KProd(KTest(TVar("a")), KLetter("q")))
    assert not holds
    assert u[1] in ("p", "q") and len(u) == 3
    x = ctx.explicit(KProd(KTest(TVar("a")), KLetter("p")))
    y = ctx.explicit(KProd(KTest(TVar("a")), KLetter("q")))
    assert gs_member(ctx, x, u) != gs_member(ctx, y, u)


def test_inclusion_is_one_sided(ctx):
    guarded = KProd(KTest(TVar("a")), KLetter("p"))
    free = KLetter("p")
    assert oracle_check(ctx, guarded, free, mode="incl") == (True, None)
    holds, u = oracle_check(ctx, free, guarded, mode="incl")
    assert not holds
    # the witness is accepted by the free side only: its atom refutes a
    assert u[0][0] is False
    assert replay_guarded_string(ctx, ctx.explicit(free), u)
    assert not replay_guarded_string(ctx, ctx.explicit(guarded), u)


def test_star_laws_hold(ctx):
    p = KLetter("p")
    lhs = KProd(KStar(p), KStar(p))
    assert oracle_check(ctx, lhs, KStar(p))[0]
    q = KLetter("q")
    lhs2 = KStar(KSum(p, q))
    rhs2 = KProd(KStar(p), KStar(KProd(q, KStar(p))))
    assert oracle_check(ctx, lhs2, rhs2)[0]


def test_replay_matches_bounded_membership(ctx):
    rng = random.Random(8)
    for _ in range(40):
        k = random_kat_expr(rng, ctx, rng.randint(0, 4))
        e = ctx.explicit(k)
        n = rng.randint(0, 2)
        u = [rng.choice(ctx.atoms)]
        for _ in range(n):
            u.append(rng.choice(ctx.letters))
            u.append(rng.choice(ctx.atoms))
        u = tuple(u)
        assert replay_guarded_string(ctx, e, u) == gs_member(ctx, e, u)


def test_random_pairs_have_valid_witnesses(ctx):
    # oracle_check re-validates internally; this loop just exercises it
    rng = random.Random(9)
    inequivalent = 0
    for _ in range(60):
        k1 = random_kat_expr(rng, ctx, rng.randint(0, 4))
        k2 = random_kat_expr(rng, ctx, rng.randint(0, 4))
        holds, u = oracle_check(ctx, k1, k2)
        if not holds:
            inequivalent += 1
            assert u is not None and len(u) % 2 == 1
    assert inequivalent > 10
