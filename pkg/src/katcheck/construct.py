"""Compiling KAT expressions into symbolic automata.

Three routes from an expression to a Moore machine over the combined
variable space (tests first, then letter-code bits):

* Brzozowski derivatives: states are expressions themselves, the
  transition diagram of a state is computed by structural recursion and
  lands directly in deterministic form.
* Antimirov partial derivatives: like the above but set-valued, giving a
  nondeterministic machine whose subsets stay small; determinised on the
  fly by the subset construction.
* A linear-size graph construction in the style of Ilie and Yu, with
  test-labelled transitions (generalised epsilons) that are removed
  afterwards by an all-pairs closure of the test matrix.

All three accept the same inputs and produce machines whose guarded-
string languages coincide; the explicit-walk and brute-force language
helpers at the bottom exist so tests can confirm exactly that.
"""

from __future__ import annotations

import itertools

from .automata import SymbolicDFA, SymbolicNFA, determinise, set_union
from .bdd import Node
from .kat import Expr, KatContext, gs_letters, star_arg


def letter_node(ctx: KatContext, p: str, hit: Node, miss: Node) -> Node:
    """Diagram over the code bits that yields ``hit`` exactly on the code
    of ``p`` and ``miss`` on every other assignment (including unused
    codes when the alphabet size is not a power of two)."""
    mgr = ctx.manager
    base = len(ctx.tests)
    acc = hit
    for j in reversed(range(ctx.code_bits)):
        if ctx.code[p][j]:
            acc = mgr.node(base + j, miss, acc)
        else:
            acc = mgr.node(base + j, acc, miss)
    return acc


class SymbolicOps:
    """Memoised symbolic derivative operators for one context.

    Only works on expressions from ``ctx.sym`` (test leaves are Boolean
    nodes).  The caches are keyed on interned expressions, so repeated
    queries over a shared context reuse all previous work.
    """

    def __init__(self, ctx: KatContext):
        self.ctx = ctx
        self._eps: dict = {}
        self._delta: dict = {}
        self._dprime: dict = {}
        self._norm: dict = {}
        self._trim: dict = {}
        mgr = ctx.manager
        self._zero_leaf = mgr.constant(ctx.sym.zero)
        self._empty_leaf = mgr.constant(())

    # -- epsilon: which atoms does the expression accept immediately ---------

    def eps_hat(self, e: Expr) -> Node:
        hit = self._eps.get(e)
        if hit is not None:
            return hit
        mgr = self.ctx.manager
        if e.kind == "test":
            out = e.payload
        elif e.kind == "letter":
            out = mgr.false
        elif e.kind == "sum":
            out = mgr.false
            for part in e.parts:
                out = mgr.dsj(out, self.eps_hat(part))
        elif e.kind == "prod":
            out = mgr.true
            for part in e.parts:
                out = mgr.cnj(out, self.eps_hat(part))
        else:
            out = mgr.true
        self._eps[e] = out
        return out

    # -- deterministic derivative: leaves are expressions ---------------------

    def _expr_sum(self, x: Node, y: Node) -> Node:
        b = self.ctx.sym
        return self.ctx.manager.apply(lambda u, v: b.sum_([u, v]), x, y,
                                      tag="expr_sum")

    def _rmul(self, node: Node, tail: Expr) -> Node:
        b = self.ctx.sym
        return self.ctx.manager.map_leaves(lambda u: b.prod([u, tail]), node,
                                           tag=("rmul", tail.uid))

    def delta_hat(self, e: Expr) -> Node:
        hit = self._delta.get(e)
        if hit is not None:
            return hit
        ctx, mgr, b = self.ctx, self.ctx.manager, self.ctx.sym
        if e.kind == "test":
            out = self._zero_leaf
        elif e.kind == "letter":
            out = letter_node(ctx, e.payload, mgr.constant(b.one),
                              self._zero_leaf)
        elif e.kind == "sum":
            out = self._zero_leaf
            for part in e.parts:
                out = self._expr_sum(out, self.delta_hat(part))
        elif e.kind == "prod":
            head, tail = e.parts[0], b.prod(e.parts[1:])
            out = self._rmul(self.delta_hat(head), tail)
            nul = self.eps_hat(head)
            if nul is not mgr.false:
                out = self._expr_sum(
                    out, mgr.guard(nul, self.delta_hat(tail), b.zero))
        else:
            out = self._rmul(self.delta_hat(star_arg(e)), e)
        self._delta[e] = out
        return out

    # -- partial derivative: leaves are sorted tuples of expressions ----------

    def _rmul_set(self, node: Node, tail: Expr) -> Node:
        b = self.ctx.sym

        def fn(members):
            return tuple(sorted({b.prod([u, tail]) for u in members}))

        return self.ctx.manager.map_leaves(fn, node,
                                           tag=("rmul_set", tail.uid))

    def delta_prime(self, e: Expr) -> Node:
        hit = self._dprime.get(e)
        if hit is not None:
            return hit
        ctx, mgr, b = self.ctx, self.ctx.manager, self.ctx.sym
        if e.kind == "test":
            out = self._empty_leaf
        elif e.kind == "letter":
            out = letter_node(ctx, e.payload, mgr.constant((b.one,)),
                              self._empty_leaf)
        elif e.kind == "sum":
            out = self._empty_leaf
            for part in e.parts:
                out = set_union(mgr, out, self.delta_prime(part))
        elif e.kind == "prod":
            head, tail = e.parts[0], b.prod(e.parts[1:])
            out = self._rmul_set(self.delta_prime(head), tail)
            nul = self.eps_hat(head)
            if nul is not mgr.false:
                out = set_union(mgr, out,
                                mgr.guard(nul, self.delta_prime(tail), ()))
        else:
            out = self._rmul_set(self.delta_prime(star_arg(e)), e)
        self._dprime[e] = out
        return out

    # -- star normalisation ----------------------------------------------------

    def star_normalise(self, e: Expr) -> Expr:
        """Rewrite so that no starred subexpression accepts every atom.

        Inside a star body, tests are dropped, inner stars are unwrapped
        and products that accept every atom are split into sums; this
        turns (phi+p)* into p*, (p*+q)* into (p+q)* and ((1+p)(1+q))*
        into (p+q)*.  Products that keep some atom out are left alone,
        so the rewrite never weakens a product into a sum unsoundly.
        Bodies that trim away entirely make the star the constant 1."""
        hit = self._norm.get(e)
        if hit is not None:
            return hit
        b = self.ctx.sym
        if e.kind in ("test", "letter"):
            out = e
        elif e.kind == "sum":
            out = b.sum_(self.star_normalise(p) for p in e.parts)
        elif e.kind == "prod":
            out = b.prod(self.star_normalise(p) for p in e.parts)
        else:
            body = self._trim_body(self.star_normalise(star_arg(e)))
            out = b.one if body is b.zero else b.star(body)
        self._norm[e] = out
        return out

    def _trim_body(self, e: Expr) -> Expr:
        hit = self._trim.get(e)
        if hit is not None:
            return hit
        b = self.ctx.sym
        if e.kind == "test":
            out = b.zero
        elif e.kind == "letter":
            out = e
        elif e.kind == "sum":
            out = b.sum_(self._trim_body(p) for p in e.parts)
        elif e.kind == "star":
            out = self._trim_body(star_arg(e))
        elif self.eps_hat(e) is self.ctx.manager.true:
            out = b.sum_(self._trim_body(p) for p in e.parts)
        else:
            out = e
        self._trim[e] = out
        return out


def _ops(ctx: KatContext) -> SymbolicOps:
    ops = getattr(ctx, "_sym_ops", None)
    if ops is None:
        ops = ctx._sym_ops = SymbolicOps(ctx)
    return ops


def eps_hat(ctx: KatContext, e: Expr) -> Node:
    return _ops(ctx).eps_hat(e)


def delta_hat(ctx: KatContext, e: Expr) -> Node:
    return _ops(ctx).delta_hat(e)


def delta_prime(ctx: KatContext, e: Expr) -> Node:
    return _ops(ctx).delta_prime(e)


def star_normalise(ctx: KatContext, e: Expr) -> Expr:
    return _ops(ctx).star_normalise(e)


# -- machine builders -----------------------------------------------------------


def brz_automaton(ctx: KatContext, state_cap: int | None = None) -> SymbolicDFA:
    """Deterministic machine whose states are expressions; start anywhere
    by handing a compiled expression to the equivalence drivers."""
    ops = _ops(ctx)
    return SymbolicDFA(ctx.manager, ops.delta_hat, ops.eps_hat,
                       state_cap=state_cap)


def antimirov_nfa(ctx: KatContext) -> SymbolicNFA:
    ops = _ops(ctx)
    return SymbolicNFA(ctx.manager, ops.delta_prime, ops.eps_hat,
                       ctx.manager.dsj, ctx.manager.false)


def antimirov_automaton(ctx: KatContext,
                        state_cap: int | None = None) -> SymbolicDFA:
    """Subset construction over the partial-derivative machine.  Start
    states are singleton tuples of compiled expressions."""
    return determinise(antimirov_nfa(ctx), state_cap=state_cap)


# -- the linear-size construction ----------------------------------------------


class EpsNFA:
    """Graph automaton with test-labelled and letter-labelled edges.

    ``J[i, j]`` is the union of the test labels between i and j (a
    Boolean node over the test variables), ``N[i, j]`` the set of letter
    names.  Several expressions can share one instance: each ``add_expr``
    allocates a fresh block with its own single initial and single
    accepting state, and blocks never touch."""

    def __init__(self, ctx: KatContext):
        self.ctx = ctx
        self.size = 0
        self.J: dict = {}
        self.N: dict = {}

    def fresh(self) -> int:
        i = self.size
        self.size += 1
        return i

    def add_test(self, i: int, j: int, label: Node) -> None:
        mgr = self.ctx.manager
        prev = self.J.get((i, j), mgr.false)
        self.J[i, j] = mgr.dsj(prev, label)

    def add_letter(self, i: int, j: int, p: str) -> None:
        self.N.setdefault((i, j), set()).add(p)

    def add_expr(self, e: Expr) -> tuple[int, int]:
        i, f = self.fresh(), self.fresh()
        self._build(e, i, f)
        return i, f

    def _build(self, e: Expr, i: int, f: int) -> None:
        if e.kind == "test":
            self.add_test(i, f, e.payload)
        elif e.kind == "letter":
            self.add_letter(i, f, e.payload)
        elif e.kind == "sum":
            for part in e.parts:
                self._build(part, i, f)
        elif e.kind == "prod":
            prev = i
            for part in e.parts[:-1]:
                mid = self.fresh()
                self._build(part, prev, mid)
                prev = mid
            self._build(e.parts[-1], prev, f)
        else:
            mid = self.fresh()
            self.add_test(i, mid, self.ctx.manager.true)
            self.add_test(mid, f, self.ctx.manager.true)
            self._build(star_arg(e), mid, mid)


def ilie_yu(ctx: KatContext, e: Expr) -> tuple[EpsNFA, int, int]:
    """Build one expression into a fresh graph; returns the graph and its
    initial and accepting state."""
    enfa = EpsNFA(ctx)
    i, f = enfa.add_expr(e)
    return enfa, i, f


def matrix_closure(enfa: EpsNFA) -> list[list[Node]]:
    """Reflexive-transitive closure of the test matrix: entry (i, j) is
    the union over test-edge paths of the conjunction of their labels.
    Tests are below 1, so the star of any diagonal entry is 1 and the
    plain all-pairs iteration computes the matricial star."""
    ctx = enfa.ctx
    mgr = ctx.manager
    n = enfa.size
    star = [[mgr.false] * n for _ in range(n)]
    for i in range(n):
        star[i][i] = mgr.true
    for (i, j), label in enfa.J.items():
        star[i][j] = mgr.dsj(star[i][j], label)
    for k in range(n):
        row_k = star[k]
        for i in range(n):
            via = star[i][k]
            if via is mgr.false:
                continue
            row_i = star[i]
            for j in range(n):
                hop = row_k[j]
                if hop is not mgr.false:
                    row_i[j] = mgr.dsj(row_i[j], mgr.cnj(via, hop))
    return star


def eps_eliminate(enfa: EpsNFA, finals: list[int]) -> SymbolicNFA:
    """Remove test-labelled edges.

    With J the test matrix, N the letter matrix, and v the acceptance
    vector, the machine (J*N, J*v) over the same states accepts the same
    guarded strings without any test edges.  Outputs are unioned over the
    given accepting states; blocks of a shared graph are disjoint, so a
    state only ever sees its own block's accepting state."""
    ctx = enfa.ctx
    mgr = ctx.manager
    n = enfa.size
    star = matrix_closure(enfa)
    empty = mgr.constant(())

    rows: list[Node] = [empty] * n
    for (i, j), letters in enfa.N.items():
        acc = rows[i]
        for p in sorted(letters):
            acc = set_union(mgr, acc, letter_node(ctx, p, mgr.constant((j,)),
                                                  empty))
        rows[i] = acc

    def t(i: int) -> Node:
        acc = empty
        for k in range(n):
            g = star[i][k]
            if g is mgr.false or rows[k] is empty:
                continue
            acc = set_union(mgr, acc, mgr.guard(g, rows[k], ()))
        return acc

    def o(i: int) -> Node:
        acc = mgr.false
        for f in finals:
            acc = mgr.dsj(acc, star[i][f])
        return acc

    return SymbolicNFA(mgr, t, o, mgr.dsj, mgr.false)


def iy_automaton(ctx: KatContext, exprs: list[Expr],
                 state_cap: int | None = None):
    """Full pipeline for a family of expressions: one shared graph with a
    block per expression, one elimination, one subset construction.
    Returns the machine and the start state for each expression."""
    enfa = EpsNFA(ctx)
    ends = [enfa.add_expr(e) for e in exprs]
    nfa = eps_eliminate(enfa, [f for _, f in ends])
    dfa = determinise(nfa, state_cap=state_cap)
    return dfa, [(i,) for i, _ in ends]


# -- language helpers for cross-checking ------------------------------------------


def gs_assignment(ctx: KatContext, atom: tuple, p: str) -> tuple:
    return tuple(atom) + ctx.code[p]


def dfa_accepts_gs(ctx: KatContext, dfa: SymbolicDFA, start, u: tuple) -> bool:
    """Run a guarded string through a machine: step through the atoms and
    letters, then evaluate the final state's output at the last atom."""
    s = start
    for i in range(gs_letters(u)):
        s = dfa.step(s, gs_assignment(ctx, u[2 * i], u[2 * i + 1]))
    return bool(ctx.manager.eval(dfa.o(s), u[-1]))


def dfa_gs_upto(ctx: KatContext, dfa: SymbolicDFA, start, n: int) -> frozenset:
    """All guarded strings of at most ``n`` letters the machine accepts
    from ``start``.  Brute force, for oracles only."""
    out = set()
    frontier = [((), start)]
    for depth in range(n + 1):
        nxt = []
        for prefix, s in frontier:
            acc = dfa.o(s)
            for atom in ctx.atoms:
                if ctx.manager.eval(acc, atom):
                    out.add(prefix + (atom,))
            if depth < n:
                for atom in ctx.atoms:
                    for p in ctx.letters:
                        nxt.append((prefix + (atom, p),
                                    dfa.step(s, gs_assignment(ctx, atom, p))))
        frontier = nxt
    return frozenset(out)


def epsnfa_accepts_gs(enfa: EpsNFA, start: int, final: int, u: tuple) -> bool:
    """Walk the graph directly: test edges are crossed when the atom in
    force satisfies their label, letter edges consume a letter.  This is
    the independent reading of the graph that elimination must preserve."""
    mgr = enfa.ctx.manager

    def closure(states: set, atom) -> set:
        seen = set(states)
        stack = list(states)
        while stack:
            i = stack.pop()
            for (a, b), label in enfa.J.items():
                if a == i and b not in seen and mgr.eval(label, atom):
                    seen.add(b)
                    stack.append(b)
        return seen

    current = closure({start}, u[0])
    for i in range(gs_letters(u)):
        p = u[2 * i + 1]
        moved = {b for (a, b), letters in enfa.N.items()
                 if a in current and p in letters}
        current = closure(moved, u[2 * i + 2])
    return final in current
