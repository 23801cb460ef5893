"""Kleene algebra with tests: expressions and guarded-string semantics.

A KAT expression is a regular expression whose leaves are either letters
from a declared alphabet or Boolean tests over declared primitive tests;
the regular-expression constants 0 and 1 are the constant tests.  Its
semantics is a set of guarded strings: alternating sequences of atoms
(total truth assignments to the tests) and letters, with atoms at both
ends.

Two expression representations live here:

* a surface AST (``KTest``/``KLetter``/...) built by the parser, and
* interned expressions (``Expr``) produced by a normalising builder, so
  that structural equality is pointer equality.  Test leaves carry either
  a Boolean BDD node (the symbolic form used by the automata
  constructions) or a raw ``TestExpr`` (the explicit form used by the
  ground-truth derivatives below).

Normalisation laws applied by the builder: sums are flattened, sorted,
deduplicated and drop 0; products are flattened, drop 1 and annihilate
on 0; a star of a star collapses.  Everything else is left alone.

The explicit derivatives at the bottom of the module define, per atom
and letter, exactly what remains of an expression after one step; they
are deliberately naive and serve as the oracle for the symbolic
constructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bdd import BddManager, Node

# -- surface syntax ------------------------------------------------------------


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TConst:
    value: bool


@dataclass(frozen=True)
class TNot:
    arg: "TestExpr"


@dataclass(frozen=True)
class TAnd:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class TOr:
    left: "TestExpr"
    right: "TestExpr"


TestExpr = TVar | TConst | TNot | TAnd | TOr


@dataclass(frozen=True)
class KTest:
    test: TestExpr


@dataclass(frozen=True)
class KLetter:
    name: str


@dataclass(frozen=True)
class KSum:
    left: "KatExpr"
    right: "KatExpr"


@dataclass(frozen=True)
class KProd:
    left: "KatExpr"
    right: "KatExpr"


@dataclass(frozen=True)
class KStar:
    arg: "KatExpr"


KatExpr = KTest | KLetter | KSum | KProd | KStar


# -- interned expressions ---------------------------------------------------------


class Expr:
    """An interned KAT expression node.

    ``kind`` is one of test/letter/sum/prod/star.  Test leaves carry a
    payload (BDD node or TestExpr), letters a name, sums and products a
    flat tuple of parts, stars a single argument.  Built only through an
    ``ExprBuilder``, so identical structures are identical objects.
    """

    __slots__ = ("kind", "payload", "parts", "uid")

    def __init__(self, kind, payload, parts, uid):
        self.kind = kind
        self.payload = payload
        self.parts = parts
        self.uid = uid

    def __lt__(self, other):
        return self.uid < other.uid

    def __repr__(self):
        return f"<expr {self.pretty()}>"

    def pretty(self) -> str:
        if self.kind == "test":
            p = self.payload
            if isinstance(p, Node):
                if p.is_leaf:
                    return "1" if p.value else "0"
                return f"b{p.uid}"
            return _pretty_test(p)
        if self.kind == "letter":
            return self.payload
        if self.kind == "sum":
            return "(" + " + ".join(e.pretty() for e in self.parts) + ")"
        if self.kind == "prod":
            return "(" + ";".join(e.pretty() for e in self.parts) + ")"
        return self.parts[0].pretty() + "*"


def _pretty_test(t: TestExpr) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TConst):
        return "1" if t.value else "0"
    if isinstance(t, TNot):
        return "!" + _pretty_test(t.arg)
    if isinstance(t, TAnd):
        return "(" + _pretty_test(t.left) + "&" + _pretty_test(t.right) + ")"
    return "(" + _pretty_test(t.left) + "|" + _pretty_test(t.right) + ")"


class ExprBuilder:
    """Interning smart constructors over a given zero/one test payload."""

    def __init__(self, zero_payload, one_payload):
        self._table: dict = {}
        self._uid = itertools.count()
        self.zero = self.test(zero_payload)
        self.one = self.test(one_payload)

    def _intern(self, kind, payload, parts) -> Expr:
        key = (kind, payload, parts)
        e = self._table.get(key)
        if e is None:
            e = Expr(kind, payload, parts, next(self._uid))
            self._table[key] = e
        return e

    def test(self, payload) -> Expr:
        return self._intern("test", payload, None)

    def letter(self, name: str) -> Expr:
        return self._intern("letter", name, None)

    def sum_(self, items: Iterable[Expr]) -> Expr:
        flat: list = []
        for e in items:
            if e.kind == "sum":
                flat.extend(e.parts)
            elif e is not self.zero:
                flat.append(e)
        parts = tuple(sorted(set(flat), key=lambda e: e.uid))
        if not parts:
            return self.zero
        if len(parts) == 1:
            return parts[0]
        return self._intern("sum", None, parts)

    def prod(self, items: Iterable[Expr]) -> Expr:
        flat: list = []
        for e in items:
            if e is self.zero:
                return self.zero
            if e.kind == "prod":
                flat.extend(e.parts)
            elif e is not self.one:
                flat.append(e)
        if not flat:
            return self.one
        if len(flat) == 1:
            return flat[0]
        return self._intern("prod", None, tuple(flat))

    def star(self, e: Expr) -> Expr:
        if e.kind == "star":
            return e
        return self._intern("star", None, (e,))


def star_arg(e: Expr) -> Expr:
    return e.parts[0]


# -- declared universe -------------------------------------------------------------


class KatContext:
    """A declared set of primitive tests and letters, with the shared BDD
    manager over test variables followed by letter-code bits.

    Letters are encoded injectively into the code bits; when the alphabet
    size is not a power of two the leftover codes exist in the variable
    universe but no letter maps to them.
    """

    def __init__(self, tests: Sequence[str], letters: Sequence[str]):
        if len(set(tests) | set(letters)) != len(tests) + len(letters):
            raise ValueError("test and letter names must be distinct")
        self.tests = list(tests)
        self.letters = list(letters)
        self.code_bits = max(len(self.letters) - 1, 0).bit_length()
        names = self.tests + [f"@{j}" for j in range(self.code_bits)]
        self.manager = BddManager(names)
        self._test_index = {a: i for i, a in enumerate(self.tests)}
        self.code = {
            p: tuple(bool(i >> j & 1) for j in range(self.code_bits))
            for i, p in enumerate(self.letters)
        }
        self.sym = ExprBuilder(self.manager.false, self.manager.true)
        self.exp = ExprBuilder(TConst(False), TConst(True))
        self.atoms = [tuple(bits) for bits in
                      itertools.product([False, True], repeat=len(self.tests))]

    # -- tests ---------------------------------------------------------------

    def compile_test(self, t: TestExpr) -> Node:
        mgr = self.manager
        if isinstance(t, TVar):
            if t.name not in self._test_index:
                raise KeyError(f"undeclared test {t.name!r}")
            return mgr.literal(self._test_index[t.name])
        if isinstance(t, TConst):
            return mgr.true if t.value else mgr.false
        if isinstance(t, TNot):
            return mgr.neg(self.compile_test(t.arg))
        if isinstance(t, TAnd):
            return mgr.cnj(self.compile_test(t.left), self.compile_test(t.right))
        if isinstance(t, TOr):
            return mgr.dsj(self.compile_test(t.left), self.compile_test(t.right))
        raise TypeError(f"not a test: {t!r}")

    def atom_sat(self, atom: tuple, t: TestExpr) -> bool:
        if isinstance(t, TVar):
            return atom[self._test_index[t.name]]
        if isinstance(t, TConst):
            return t.value
        if isinstance(t, TNot):
            return not self.atom_sat(atom, t.arg)
        if isinstance(t, TAnd):
            return self.atom_sat(atom, t.left) and self.atom_sat(atom, t.right)
        if isinstance(t, TOr):
            return self.atom_sat(atom, t.left) or self.atom_sat(atom, t.right)
        raise TypeError(f"not a test: {t!r}")

    # -- expression conversion --------------------------------------------------

    def _convert(self, k: KatExpr, b: ExprBuilder, leaf) -> Expr:
        if isinstance(k, KTest):
            return b.test(leaf(k.test))
        if isinstance(k, KLetter):
            if k.name not in self.code:
                raise KeyError(f"undeclared letter {k.name!r}")
            return b.letter(k.name)
        if isinstance(k, KSum):
            return b.sum_([self._convert(k.left, b, leaf),
                           self._convert(k.right, b, leaf)])
        if isinstance(k, KProd):
            return b.prod([self._convert(k.left, b, leaf),
                           self._convert(k.right, b, leaf)])
        if isinstance(k, KStar):
            return b.star(self._convert(k.arg, b, leaf))
        raise TypeError(f"not a KAT expression: {k!r}")

    def compile(self, k: KatExpr) -> Expr:
        """Symbolic form: test leaves become canonical Boolean nodes."""
        return self._convert(k, self.sym, self.compile_test)

    def explicit(self, k: KatExpr) -> Expr:
        """Explicit form: test leaves stay as raw TestExprs (oracle side)."""
        return self._convert(k, self.exp, lambda t: t)


# -- guarded strings -----------------------------------------------------------------


def gs_concat(u: tuple, v: tuple):
    """Fusion product: defined when u ends with the atom v starts with."""
    if u[-1] != v[0]:
        return None
    return u + v[1:]


def gs_letters(u: tuple) -> int:
    return len(u) // 2


def guarded_strings_upto(ctx: KatContext, e: Expr, n: int) -> frozenset:
    """All guarded strings of the language of ``e`` with at most ``n``
    letters.  Exact at every bound: fusions cannot shrink letter counts."""
    if e.kind == "test":
        if isinstance(e.payload, Node):
            return frozenset((a,) for a in ctx.atoms
                             if ctx.manager.eval(e.payload, a))
        return frozenset((a,) for a in ctx.atoms if ctx.atom_sat(a, e.payload))
    if e.kind == "letter":
        return frozenset((a, e.payload, b)
                         for a in ctx.atoms for b in ctx.atoms)
    if e.kind == "sum":
        out = set()
        for part in e.parts:
            out |= guarded_strings_upto(ctx, part, n)
        return frozenset(out)
    if e.kind == "prod":
        acc = frozenset((a,) for a in ctx.atoms)  # unit of fusion
        for part in e.parts:
            rhs = guarded_strings_upto(ctx, part, n)
            nxt = set()
            for u in acc:
                if gs_letters(u) > n:
                    continue
                for v in rhs:
                    w = gs_concat(u, v)
                    if w is not None and gs_letters(w) <= n:
                        nxt.add(w)
            acc = nxt
        return frozenset(acc)
    if e.kind == "star":
        base = guarded_strings_upto(ctx, star_arg(e), n)
        out = set((a,) for a in ctx.atoms)  # zero iterations
        frontier = set(out)
        while frontier:
            nxt = set()
            for u in frontier:
                for v in base:
                    w = gs_concat(u, v)
                    if w is not None and gs_letters(w) <= n and w not in out:
                        nxt.add(w)
            out |= nxt
            frontier = nxt
        return frozenset(out)
    raise TypeError(e.kind)


def gs_member(ctx: KatContext, e: Expr, u: tuple) -> bool:
    return u in guarded_strings_upto(ctx, e, gs_letters(u))


# -- explicit derivatives (ground truth) -------------------------------------------


def eps_alpha(ctx: KatContext, e: Expr, atom: tuple) -> bool:
    """Does ``e`` accept the single-atom string (atom)?"""
    if e.kind == "test":
        return ctx.atom_sat(atom, e.payload)
    if e.kind == "letter":
        return False
    if e.kind == "sum":
        return any(eps_alpha(ctx, p, atom) for p in e.parts)
    if e.kind == "prod":
        return all(eps_alpha(ctx, p, atom) for p in e.parts)
    return True  # star


def delta_alpha_p(ctx: KatContext, e: Expr, atom: tuple, p: str) -> Expr:
    """What remains of ``e`` after consuming the atom and the letter, one
    clause per expression form; the product clause adds the right factors'
    derivative only when the prefix accepts the atom."""
    b = ctx.exp
    if e.kind == "test":
        return b.zero
    if e.kind == "letter":
        return b.one if e.payload == p else b.zero
    if e.kind == "sum":
        return b.sum_(delta_alpha_p(ctx, part, atom, p) for part in e.parts)
    if e.kind == "prod":
        head, tail = e.parts[0], b.prod(e.parts[1:])
        out = b.prod([delta_alpha_p(ctx, head, atom, p), tail])
        if eps_alpha(ctx, head, atom):
            out = b.sum_([out, delta_alpha_p(ctx, tail, atom, p)])
        return out
    return b.prod([delta_alpha_p(ctx, star_arg(e), atom, p), e])  # star


class ExplicitDFA:
    """The derivative automaton over the explicit alphabet At x Sigma,
    with outputs the per-atom acceptance vector.  Oracle use only."""

    def __init__(self, ctx: KatContext):
        self.ctx = ctx
        self.letters = [(a, p) for a in ctx.atoms for p in ctx.letters]
        self._o_cache: dict = {}

    def t(self, e: Expr, letter) -> Expr:
        atom, p = letter
        return delta_alpha_p(self.ctx, e, atom, p)

    def o(self, e: Expr) -> tuple:
        hit = self._o_cache.get(e)
        if hit is None:
            hit = tuple(eps_alpha(self.ctx, e, a) for a in self.ctx.atoms)
            self._o_cache[e] = hit
        return hit
