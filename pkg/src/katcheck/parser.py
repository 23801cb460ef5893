"""Concrete syntax for KAT expressions.

Grammar, loosest to tightest:

    expr    := prod ('+' prod)*
    prod    := testor ((';')? testor)*        juxtaposition also multiplies
    testor  := testand ('|' testand)*
    testand := starred ('&' starred)*
    starred := unary '*'*
    unary   := ('!' | '~') unary | primary
    primary := identifier | '0' | '1' | '(' expr ')'

Identifiers are lowercase words and must be declared, either as tests or
as letters.  '0' and '1' are the constant tests.  '!', '&' and '|' apply
to tests only; a test stays a test under parentheses, so !(a|b) is fine
while !(a;b) and !p are type errors.  '!' binds tighter than '*', so
!a* is (!a)*.  Errors carry the character position they were raised at.
"""

from __future__ import annotations

import re

from .kat import (
    KatExpr,
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


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"[a-z][a-z0-9_]*|[01+;*!~&|()]|\S")

_STARTERS = {"ident", "0", "1", "(", "!", "~"}


def _tokenise(text: str) -> list[tuple[str, str, int]]:
    out = []
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if len(tok) == 1 and tok in "01+;*!~&|()":
            out.append((tok, tok, m.start()))
        elif tok[0].isalpha():
            out.append(("ident", tok, m.start()))
        else:
            raise ParseError(f"unexpected character {tok!r}", m.start())
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, tests, letters):
        self.tokens = _tokenise(text)
        self.pos = 0
        self.tests = set(tests)
        self.letters = set(letters)

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def here(self) -> int:
        return self.tokens[self.pos][2]

    def expect(self, kind: str) -> tuple[str, str, int]:
        if self.peek() != kind:
            raise ParseError(f"expected {kind!r}", self.here())
        return self.next()

    def parse(self) -> KatExpr:
        e = self.expr()
        if self.peek() != "end":
            raise ParseError(f"unexpected {self.tokens[self.pos][1]!r}",
                             self.here())
        return e

    def expr(self) -> KatExpr:
        e = self.prod()
        while self.peek() == "+":
            self.next()
            e = KSum(e, self.prod())
        return e

    def prod(self) -> KatExpr:
        e = self.testor()
        while True:
            if self.peek() == ";":
                self.next()
                e = KProd(e, self.testor())
            elif self.peek() in _STARTERS:
                e = KProd(e, self.testor())
            else:
                return e

    def _test_of(self, e: KatExpr, op: str, position: int):
        if not isinstance(e, KTest):
            raise ParseError(f"{op!r} applies to tests only", position)
        return e.test

    def testor(self) -> KatExpr:
        e = self.testand()
        while self.peek() == "|":
            _, _, at = self.next()
            l = self._test_of(e, "|", at)
            r = self._test_of(self.testand(), "|", at)
            e = KTest(TOr(l, r))
        return e

    def testand(self) -> KatExpr:
        e = self.starred()
        while self.peek() == "&":
            _, _, at = self.next()
            l = self._test_of(e, "&", at)
            r = self._test_of(self.starred(), "&", at)
            e = KTest(TAnd(l, r))
        return e

    def starred(self) -> KatExpr:
        e = self.unary()
        while self.peek() == "*":
            self.next()
            e = KStar(e)
        return e

    def unary(self) -> KatExpr:
        if self.peek() in ("!", "~"):
            _, _, at = self.next()
            return KTest(TNot(self._test_of(self.unary(), "!", at)))
        return self.primary()

    def primary(self) -> KatExpr:
        kind, value, at = self.next()
        if kind == "ident":
            if value in self.tests:
                return KTest(TVar(value))
            if value in self.letters:
                return KLetter(value)
            raise ParseError(f"undeclared identifier {value!r}", at)
        if kind == "0":
            return KTest(TConst(False))
        if kind == "1":
            return KTest(TConst(True))
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {value or 'end of input'!r}", at)


def parse(text: str, tests, letters) -> KatExpr:
    """Parse concrete syntax into the surface AST, resolving identifiers
    against the declared test and letter names."""
    return _Parser(text, tests, letters).parse()
