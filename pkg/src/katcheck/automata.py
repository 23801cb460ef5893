"""Symbolic automata: Moore machines whose transition function is a BDD.

A deterministic machine assigns each state an output and a diagram whose
leaves are successor states; reading a letter means evaluating the diagram
on the letter's assignment.  A nondeterministic machine has diagrams whose
leaves are finite sets of states, represented as sorted tuples so that they
intern inside the BDD store.

Both kinds are views: transition and output functions are arbitrary
callables, memoised here, so automata with infinite or expensive state
spaces (derivatives of expressions, subset constructions) unfold only as
far as an exploration demands.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable

from .bdd import BddManager, Node


class StateLimitError(RuntimeError):
    """Exploration touched more states than the configured cap."""

    def __init__(self, cap):
        super().__init__(f"state cap {cap} exceeded while unfolding automaton")
        self.cap = cap


class SymbolicDFA:
    """Deterministic Moore machine with BDD transitions.

    ``t(x)`` is a diagram with state leaves, ``o(x)`` the output attached to
    ``x``.  Outputs live in some join-semilattice; for acceptance semantics
    they are Boolean BDD nodes and equality is pointer equality.
    """

    def __init__(self, manager: BddManager, t: Callable, o: Callable,
                 state_cap: int | None = None):
        self.manager = manager
        self._t = t
        self._o = o
        self._t_cache: dict = {}
        self._o_cache: dict = {}
        self.state_cap = state_cap

    def t(self, state) -> Node:
        hit = self._t_cache.get(state)
        if hit is None:
            if self.state_cap is not None and len(self._t_cache) >= self.state_cap:
                raise StateLimitError(self.state_cap)
            hit = self._t_cache[state] = self._t(state)
        return hit

    def o(self, state):
        hit = self._o_cache.get(state)
        if hit is None:
            hit = self._o_cache[state] = self._o(state)
        return hit

    @property
    def states_explored(self) -> int:
        return len(self._t_cache)

    def step(self, state, assignment):
        return self.manager.eval(self.t(state), assignment)


class SymbolicNFA:
    """Nondeterministic variant: transition leaves are sorted state tuples,
    outputs are joined over a set with ``join`` starting from ``join_unit``."""

    def __init__(self, manager: BddManager, t: Callable, o: Callable,
                 join: Callable, join_unit):
        self.manager = manager
        self._t = t
        self._o = o
        self.join = join
        self.join_unit = join_unit
        self._t_cache: dict = {}
        self._o_cache: dict = {}

    def t(self, state) -> Node:
        hit = self._t_cache.get(state)
        if hit is None:
            hit = self._t_cache[state] = self._t(state)
        return hit

    def o(self, state):
        hit = self._o_cache.get(state)
        if hit is None:
            hit = self._o_cache[state] = self._o(state)
        return hit


def merge_sets(a: tuple, b: tuple) -> tuple:
    """Union of two sorted tuples, kept sorted and duplicate-free."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            out.append(x)
            i += 1
        else:
            out.append(y)
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def set_union(manager: BddManager, x: Node, y: Node) -> Node:
    """Pointwise union of two set-leaved diagrams."""
    return manager.apply(merge_sets, x, y, tag="set_union")


def determinise(nfa: SymbolicNFA, state_cap: int | None = None) -> SymbolicDFA:
    """Subset construction, on the fly.

    States of the result are sorted tuples of the argument's states.  The
    transition of a set is the leafwise union of the members' transitions;
    the output is the join of the members' outputs.  Nothing is unfolded
    until the caller steps into it.
    """
    mgr = nfa.manager
    empty = mgr.constant(())

    def t(states: tuple) -> Node:
        acc = empty
        for s in states:
            acc = set_union(mgr, acc, nfa.t(s))
        return acc

    def o(states: tuple):
        acc = nfa.join_unit
        for s in states:
            acc = nfa.join(acc, nfa.o(s))
        return acc

    return SymbolicDFA(mgr, t, o, state_cap=state_cap)


def all_letters(manager: BddManager) -> list[tuple]:
    """Every assignment of the manager's variables, as tuples of bools."""
    return list(itertools.product([False, True], repeat=manager.num_vars))


def reachable_states(dfa: SymbolicDFA, roots: Iterable) -> list:
    """States reachable from ``roots`` through transition leaves, in BFS
    discovery order."""
    seen = []
    seen_set = set()
    queue = list(roots)
    while queue:
        s = queue.pop(0)
        if s in seen_set:
            continue
        seen_set.add(s)
        seen.append(s)
        for leaf in leaf_values(dfa.t(s)):
            if leaf not in seen_set:
                queue.append(leaf)
    return seen


def leaf_values(node: Node) -> list:
    out = []
    seen = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if n.uid in seen:
            continue
        seen.add(n.uid)
        if n.is_leaf:
            out.append(n.value)
        else:
            stack.append(n.hi)
            stack.append(n.lo)
    return out


def dfa_language_upto(dfa: SymbolicDFA, state, length: int) -> dict:
    """Explicit-alphabet oracle: map every word of at most ``length``
    letters (letters = full variable assignments) to the output reached."""
    letters = all_letters(dfa.manager)
    out = {(): dfa.o(state)}
    frontier = {(): state}
    for _ in range(length):
        nxt = {}
        for word, s in frontier.items():
            for a in letters:
                w2 = word + (a,)
                s2 = dfa.step(s, a)
                nxt[w2] = s2
                out[w2] = dfa.o(s2)
        frontier = nxt
    return out


def nfa_language_upto(nfa: SymbolicNFA, states: tuple, length: int) -> dict:
    """Same, simulating the set semantics explicitly (no BDD union), for
    cross-checking determinise."""
    letters = all_letters(nfa.manager)

    def out_of(ss):
        acc = nfa.join_unit
        for s in ss:
            acc = nfa.join(acc, nfa.o(s))
        return acc

    out = {(): out_of(states)}
    frontier = {(): tuple(states)}
    for _ in range(length):
        nxt = {}
        for word, ss in frontier.items():
            for a in letters:
                succ = set()
                for s in ss:
                    succ.update(nfa.manager.eval(nfa.t(s), a))
                w2 = word + (a,)
                t2 = tuple(sorted(succ))
                nxt[w2] = t2
                out[w2] = out_of(t2)
        frontier = nxt
    return out


def dfa_to_dot(dfa: SymbolicDFA, roots: Iterable,
               state_label: Callable = str) -> str:
    """DOT dump of the reachable fragment: one box per state pointing into
    the shared transition diagram."""
    states = reachable_states(dfa, roots)
    mgr = dfa.manager
    lines = ["digraph dfa {"]
    bdd_dot = mgr.to_dot([dfa.t(s) for s in states],
                         leaf_label=lambda v: state_label(v))
    lines.extend(bdd_dot.splitlines()[1:-1])
    for s in states:
        lines.append(
            f'  s{id(s)} [shape=box3d, label="{state_label(s)} / {dfa.o(s)!r}"];')
        lines.append(f"  s{id(s)} -> n{dfa.t(s).uid};")
    lines.append("}")
    return "\n".join(lines)
