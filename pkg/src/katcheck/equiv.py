"""Coinductive equivalence and inclusion checks on symbolic Moore machines.

Three drivers share the same skeleton: keep a todo queue of state pairs,
pop, compare outputs, then push all pairs of successor states.

* ``naive_equiv`` enumerates an explicit alphabet, one push per letter.
* ``symb_equiv`` never looks at letters: it zips the two transition
  diagrams and pushes one pair per *leaf pair* of the zipped structure,
  memoising on node pairs so that shared substructure is traversed once
  for the whole run.
* ``dsf_equiv`` replaces both the node-pair memo and the visited relation
  by a single union-find forest over BDD nodes; pairs already related up
  to equivalence are skipped, which can cut strictly more work than plain
  memoisation.

Outputs are compared by identity, so they must be interned values (BDD
nodes, or plain True/False).  Todo queues are FIFO, so the witness word
extracted from a failing run has minimal length.

A witness is a word of symbolic letters; each letter is a tuple of
``(var, bool)`` literals collected along the descent into the zipped
transition diagrams.  Variables absent from a letter are unconstrained:
every concrete assignment extending every letter of the witness leads to
the same output-distinguished state pair.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .automata import SymbolicDFA, all_letters
from .bdd import Node

Letter = tuple
Word = tuple


@dataclass
class Stats:
    output_tests: int = 0
    pairs_pushed: int = 0
    nodes_visited: int = 0


@dataclass
class Verdict:
    """Outcome of an equivalence or inclusion run.

    ``holds`` answers the question asked (equivalence or inclusion).  On
    failure ``witness`` is the symbolic word leading to the failing state
    pair and ``outputs`` holds that pair's outputs.  On success the
    certificate is kept for auditing: the visited relation for the
    memoising drivers, the forest for the union-find one.
    """

    holds: bool
    witness: Word | None = None
    outputs: tuple | None = None
    stats: Stats = field(default_factory=Stats)
    relation: frozenset | None = None
    forest: "UnionFind | None" = None

    def __bool__(self):
        return self.holds


def _same(u, v):
    return u is v


# -- explicit-alphabet baseline ---------------------------------------------


def naive_equiv(t: Callable, o: Callable, letters, x, y,
                compare: Callable = _same, on_iteration: Callable = None) -> Verdict:
    """Hopcroft-Karp-style loop over an explicit transition function
    ``t(state, letter)``.

    FIFO queue plus a visited set; a popped pair already seen is dropped
    without an output test.  ``compare`` decides the output check, identity
    by default (inclusion passes an order instead).  ``on_iteration``, when
    given, observes ``(r, todo)`` at each loop head, for invariant audits.
    """
    stats = Stats()
    r = set()
    todo = deque([((), x, y)])
    while todo:
        if on_iteration is not None:
            on_iteration(r, todo)
        word, u, v = todo.popleft()
        if (u, v) in r:
            continue
        stats.output_tests += 1
        if not compare(o(u), o(v)):
            return Verdict(False, witness=word, outputs=(o(u), o(v)), stats=stats)
        r.add((u, v))
        for a in letters:
            todo.append((word + (a,), t(u, a), t(v, a)))
            stats.pairs_pushed += 1
    return Verdict(True, stats=stats, relation=frozenset(r))


# -- node-pair iteration over zipped transition diagrams ----------------------


class PairExplorer:
    """Visit every leaf pair reachable from pairs of BDD nodes, memoised on
    node pairs.

    The memo lives for the whole equivalence run: a node pair reached again
    while expanding a later state pair is skipped, including its entire
    substructure.  ``visit(v, w, letter)`` receives leaf values plus the
    literals collected along this first descent.
    """

    def __init__(self, visit: Callable):
        self.visit = visit
        self.memo = set()
        self.nodes_visited = 0
        self._lits: list = []

    def run(self, x: Node, y: Node) -> None:
        key = (x, y)
        if key in self.memo:
            return
        self.memo.add(key)
        self.nodes_visited += 1
        lits = self._lits
        if x.is_leaf and y.is_leaf:
            self.visit(x.value, y.value, tuple(lits))
            return
        if not x.is_leaf and (y.is_leaf or x.var < y.var):
            var, lo, hi, both = x.var, (x.lo, y), (x.hi, y), False
        elif x.is_leaf or (not y.is_leaf and y.var < x.var):
            var, lo, hi, both = y.var, (x, y.lo), (x, y.hi), False
        else:
            var, lo, hi, both = x.var, (x.lo, y.lo), (x.hi, y.hi), True
        lits.append((var, False))
        self.run(*lo)
        lits.pop()
        lits.append((var, True))
        self.run(*hi)
        lits.pop()


def symb_equiv(dfa: SymbolicDFA, x, y, compare: Callable = _same) -> Verdict:
    """Symbolic equivalence: one push per distinct leaf pair of the zipped
    transition diagrams, one output test per distinct state pair."""
    stats = Stats()
    r = set()
    todo = deque()
    current_word = ()

    def push(u, v, letter):
        stats.pairs_pushed += 1
        todo.append((current_word + (letter,), u, v))

    explorer = PairExplorer(push)
    todo.append(((), x, y))
    while todo:
        word, u, v = todo.popleft()
        if (u, v) in r:
            continue
        stats.output_tests += 1
        ou, ov = dfa.o(u), dfa.o(v)
        if not compare(ou, ov):
            stats.nodes_visited = explorer.nodes_visited
            return Verdict(False, witness=word, outputs=(ou, ov), stats=stats)
        r.add((u, v))
        current_word = word
        explorer.run(dfa.t(u), dfa.t(v))
    stats.nodes_visited = explorer.nodes_visited
    return Verdict(True, stats=stats, relation=frozenset(r))


def symb_incl(dfa: SymbolicDFA, x, y, leq: Callable) -> Verdict:
    """Inclusion: same exploration, outputs compared with ``leq``."""
    return symb_equiv(dfa, x, y, compare=leq)


# -- union-find over BDD nodes ------------------------------------------------


class UnionFind:
    """Disjoint set forest with path halving and size bookkeeping.

    ``link`` is the raw directed merge (argument order matters: the first
    node points to the second, which becomes the representative); it is
    used where the caller must control the direction.  ``union_by_size``
    is for the free cases.
    """

    def __init__(self):
        self.parent: dict = {}
        self.size: dict = {}

    def find(self, x):
        parent = self.parent
        while True:
            y = parent.get(x)
            if y is None:
                return x
            z = parent.get(y)
            if z is None:
                return y
            parent[x] = z  # halving: skip to the grandparent
            x = z

    def link(self, x, y) -> None:
        self.parent[x] = y
        self.size[y] = self.size.get(y, 1) + self.size.get(x, 1)

    def union_by_size(self, x, y):
        if self.size.get(x, 1) > self.size.get(y, 1):
            x, y = y, x
        self.link(x, y)
        return y

    def same(self, x, y) -> bool:
        return self.find(x) is self.find(y)

    def classes(self) -> dict:
        """Map each touched element to its class representative."""
        out = {}
        for x in set(self.parent) | set(self.parent.values()):
            out[x] = self.find(x)
        return out


class ForestExplorer:
    """Leaf-pair iteration where the memo is a union-find forest over nodes.

    Every non-trivial visit merges two classes, so the number of visits is
    bounded by the number of nodes ever touched.  Link directions keep the
    implicit quotient BDD ordered and acyclic: a branch always points to a
    leaf, and among branches the smaller label points to the bigger one.
    The remaining cases (two leaves, equal labels) are free and use union
    by size.
    """

    def __init__(self, visit: Callable):
        self.visit = visit
        self.forest = UnionFind()
        self.nodes_visited = 0
        self._lits: list = []

    def run(self, x: Node, y: Node) -> None:
        forest = self.forest
        x = forest.find(x)
        y = forest.find(y)
        if x is y:
            return
        self.nodes_visited += 1
        lits = self._lits
        xleaf, yleaf = x.is_leaf, y.is_leaf
        if xleaf and yleaf:
            forest.union_by_size(x, y)
            self.visit(x.value, y.value, tuple(lits))
            return
        if not xleaf and (yleaf or x.var < y.var):
            # forced: branch points to leaf, smaller label to bigger label
            forest.link(x, y)
            var, lo, hi = x.var, (x.lo, y), (x.hi, y)
        elif xleaf or y.var < x.var:
            forest.link(y, x)
            var, lo, hi = y.var, (x, y.lo), (x, y.hi)
        else:
            forest.union_by_size(x, y)
            var, lo, hi = x.var, (x.lo, y.lo), (x.hi, y.hi)
        lits.append((var, False))
        self.run(*lo)
        lits.pop()
        lits.append((var, True))
        self.run(*hi)
        lits.pop()


def dsf_equiv(dfa: SymbolicDFA, x, y, compare: Callable = _same) -> Verdict:
    """Equivalence with the forest standing in for both the memo and the
    visited relation.

    There is no membership test on pop: a state pair can be popped more
    than once (at most twice: pushes merge classes, and only the seeded
    pair enters without a merge), and every pop costs an output test.
    """
    stats = Stats()
    todo = deque()
    current_word = ()

    def push(u, v, letter):
        stats.pairs_pushed += 1
        todo.append((current_word + (letter,), u, v))

    explorer = ForestExplorer(push)
    todo.append(((), x, y))
    while todo:
        word, u, v = todo.popleft()
        stats.output_tests += 1
        ou, ov = dfa.o(u), dfa.o(v)
        if not compare(ou, ov):
            stats.nodes_visited = explorer.nodes_visited
            return Verdict(False, witness=word, outputs=(ou, ov), stats=stats)
        current_word = word
        explorer.run(dfa.t(u), dfa.t(v))
    stats.nodes_visited = explorer.nodes_visited
    return Verdict(True, stats=stats, forest=explorer.forest)


# -- witnesses ----------------------------------------------------------------


def render_word(word: Word | None, var_names) -> str:
    """Human form of a symbolic word: ``[+a -b]; [-a]``, or ``<empty>``."""
    if not word:
        return "<empty>"
    letters = []
    for letter in word:
        parts = [("+" if pos else "-") + var_names[v] for v, pos in letter]
        letters.append("[" + " ".join(parts) + "]")
    return "; ".join(letters)


def letter_concretisations(letter: Letter, num_vars: int):
    """All full assignments extending the letter's literals."""
    fixed = dict(letter)
    free = [v for v in range(num_vars) if v not in fixed]
    for bits in itertools.product([False, True], repeat=len(free)):
        a = dict(fixed)
        a.update(zip(free, bits))
        yield tuple(a[v] for v in range(num_vars))


def word_concretisations(word: Word, num_vars: int, cap: int = 1024,
                         seed: int = 0):
    """Concrete words extending a symbolic witness; all of them if there
    are at most ``cap``, otherwise a seeded sample of size ``cap``."""
    per_letter = [list(letter_concretisations(l, num_vars)) for l in word]
    total = 1
    for opts in per_letter:
        total *= len(opts)
    if total <= cap:
        yield from itertools.product(*per_letter)
        return
    rng = random.Random(seed)
    for _ in range(cap):
        yield tuple(rng.choice(opts) for opts in per_letter)


def word_distinguishes(dfa: SymbolicDFA, x, y, word: Word,
                       compare: Callable = _same, cap: int = 1024) -> bool:
    """Check witness soundness: every sampled concretisation of ``word``
    drives ``x`` and ``y`` to a pair of states whose outputs fail
    ``compare``."""
    n = dfa.manager.num_vars
    for concrete in word_concretisations(word, n, cap=cap):
        u, v = x, y
        for a in concrete:
            u = dfa.step(u, a)
            v = dfa.step(v, a)
        if compare(dfa.o(u), dfa.o(v)):
            return False
    return True


# -- certificates -------------------------------------------------------------


def check_progression(rel, o: Callable, t: Callable, letters,
                      into=None, compare: Callable = _same) -> bool:
    """Definition of progression, explicitly: every pair in ``rel`` has
    outputs passing ``compare`` and all successor pairs inside ``into``
    (``rel`` itself by default)."""
    into = rel if into is None else into
    for u, v in rel:
        if not compare(o(u), o(v)):
            return False
        for a in letters:
            if (t(u, a), t(v, a)) not in into:
                return False
    return True


def relation_is_bisimulation(dfa: SymbolicDFA, rel) -> bool:
    """Explicit-alphabet bisimulation check of a visited relation."""
    letters = all_letters(dfa.manager)
    return check_progression(rel, dfa.o, dfa.step, letters)


def forest_is_bisimulation(dfa: SymbolicDFA, forest: UnionFind, x, y) -> bool:
    """Check the union-find certificate of a successful dsf run.

    The forest's restriction to leaves partitions states; its equivalence
    closure must be a bisimulation, and the initial pair must progress
    into it (the seeded pair itself is only in the forest if it was also
    visited as a leaf pair).
    """
    reps = forest.classes()
    classes: dict = {}
    for node, rep in reps.items():
        if node.is_leaf:
            classes.setdefault(rep, []).append(node.value)

    def cls(state):
        leaf = dfa.manager.constant(state)
        return forest.find(leaf)

    letters = all_letters(dfa.manager)
    for members in classes.values():
        first = members[0]
        if any(dfa.o(s) is not dfa.o(first) for s in members[1:]):
            return False
        for a in letters:
            succ_first = cls(dfa.step(first, a))
            for s in members[1:]:
                if cls(dfa.step(s, a)) is not succ_first:
                    return False
    # the seeded pair progresses into the partition
    if dfa.o(x) is not dfa.o(y):
        return False
    for a in letters:
        if cls(dfa.step(x, a)) is not cls(dfa.step(y, a)):
            return False
    return True
