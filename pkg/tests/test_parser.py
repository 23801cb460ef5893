import random

import pytest

from katcheck.kat import (
    KatContext,
    KLetter,
    KProd,
    KStar,
    KSum,
    KTest,
    TAnd,
    TConst,
    TNot,
    TOr,
    TVar,
)
from katcheck.parser import ParseError, parse

from test_kat import random_kat_expr

TESTS = ["a", "b"]
LETTERS = ["p", "q"]


def P(text):
    return parse(text, TESTS, LETTERS)


def test_leaves():
    assert P("a") == KTest(TVar("a"))
    assert P("p") == KLetter("p")
    assert P("0") == KTest(TConst(False))
    assert P("1") == KTest(TConst(True))


def test_guarded_choice():
    want = KSum(KProd(KTest(TVar("a")), KLetter("p")),
                KProd(KTest(TNot(TVar("a"))), KLetter("q")))
    assert P("a;p + !a;q") == want


def test_double_star_nests():
    assert P("p**") == KStar(KStar(KLetter("p")))


def test_not_binds_before_star():
    assert P("!a*") == KStar(KTest(TNot(TVar("a"))))


def test_prod_binds_before_sum():
    assert P("a+b;p") == KSum(KTest(TVar("a")),
                              KProd(KTest(TVar("b")), KLetter("p")))


def test_juxtaposition():
    assert P("a p") == P("a;p")
    assert P("(a+p)(b+q)") == KProd(P("a+p"), P("b+q"))
    assert P("a b p") == KProd(KProd(KTest(TVar("a")), KTest(TVar("b"))),
                               KLetter("p"))


def test_test_operator_precedence():
    assert P("a&b|a") == KTest(TOr(TAnd(TVar("a"), TVar("b")), TVar("a")))
    assert P("a|b&a") == KTest(TOr(TVar("a"), TAnd(TVar("b"), TVar("a"))))
    assert P("!(a|b)") == KTest(TNot(TOr(TVar("a"), TVar("b"))))
    assert P("!a&b") == KTest(TAnd(TNot(TVar("a")), TVar("b")))


def test_test_ops_bind_tighter_than_prod():
    assert P("a&b;p") == KProd(KTest(TAnd(TVar("a"), TVar("b"))),
                               KLetter("p"))


def test_parens():
    assert P("(a+b);p") == KProd(KSum(KTest(TVar("a")), KTest(TVar("b"))),
                                 KLetter("p"))
    assert P("((p))") == KLetter("p")


@pytest.mark.parametrize("text,at", [
    ("(", 1),
    ("a+", 2),
    ("a)", 1),
    ("a @ b", 2),
    ("a;;p", 2),
])
def test_syntax_errors_carry_position(text, at):
    with pytest.raises(ParseError) as err:
        P(text)
    assert err.value.position == at


def test_undeclared_identifier():
    with pytest.raises(ParseError) as err:
        P("a; r")
    assert err.value.position == 3
    assert "r" in str(err.value)


@pytest.mark.parametrize("text", ["!p", "a&p", "p|a", "!(a;b)", "!(a+b)",
                                  "a & p*"])
def test_type_errors_on_non_tests(text):
    with pytest.raises(ParseError) as err:
        P(text)
    assert "tests only" in str(err.value)


def test_parenthesised_tests_stay_tests():
    assert P("!((a))") == KTest(TNot(TVar("a")))
    assert P("(a|b)&a") == KTest(TAnd(TOr(TVar("a"), TVar("b")), TVar("a")))


# -- round trip against an independent printer ---------------------------------


def _test_text(t):
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TConst):
        return "1" if t.value else "0"
    if isinstance(t, TNot):
        return "!(" + _test_text(t.arg) + ")"
    if isinstance(t, TAnd):
        return "(" + _test_text(t.left) + "&" + _test_text(t.right) + ")"
    return "(" + _test_text(t.left) + "|" + _test_text(t.right) + ")"


def _kat_text(k):
    if isinstance(k, KTest):
        return "(" + _test_text(k.test) + ")"
    if isinstance(k, KLetter):
        return k.name
    if isinstance(k, KSum):
        return "(" + _kat_text(k.left) + "+" + _kat_text(k.right) + ")"
    if isinstance(k, KProd):
        return "(" + _kat_text(k.left) + ";" + _kat_text(k.right) + ")"
    return "(" + _kat_text(k.arg) + ")*"


def test_round_trip_random_expressions():
    ctx = KatContext(TESTS, LETTERS)
    rng = random.Random(31)
    for _ in range(150):
        k = random_kat_expr(rng, ctx, rng.randint(0, 6))
        assert P(_kat_text(k)) == k
