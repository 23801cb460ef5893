"""Symbolic automata tests: determinisation against an explicit subset
simulation, set unions against plain set algebra."""

import random

from katcheck.bdd import BddManager
from katcheck.automata import (SymbolicDFA, SymbolicNFA, all_letters,
                               determinise, dfa_language_upto, dfa_to_dot,
                               leaf_values, merge_sets, nfa_language_upto,
                               reachable_states, set_union)


def test_merge_sets():
    assert merge_sets((1, 3), (2, 3, 5)) == (1, 2, 3, 5)
    assert merge_sets((), (4,)) == (4,)
    assert merge_sets((4,), ()) == (4,)
    assert merge_sets((1, 2), (1, 2)) == (1, 2)


def random_set_node(rng, mgr, states, nvars):
    def build(var):
        if var == nvars:
            k = rng.randrange(len(states) + 1)
            return mgr.constant(tuple(sorted(rng.sample(states, k))))
        return mgr.node(var, build(var + 1), build(var + 1))

    return build(0)


def test_set_union_oracle():
    rng = random.Random(10)
    mgr = BddManager(["a", "b"])
    states = [0, 1, 2, 3]
    for _ in range(100):
        x = random_set_node(rng, mgr, states, 2)
        y = random_set_node(rng, mgr, states, 2)
        u = set_union(mgr, x, y)
        for a in all_letters(mgr):
            assert set(mgr.eval(u, a)) == set(mgr.eval(x, a)) | set(mgr.eval(y, a))
        # idempotent and commutative by canonicity
        assert set_union(mgr, x, x) is x
        assert set_union(mgr, x, y) is set_union(mgr, y, x)


def fixed_nfa(mgr):
    # three states; 0 steps to {1,2} when a, {1} otherwise; 1 loops; 2 dies
    table = {
        0: mgr.node(0, mgr.constant((1,)), mgr.constant((1, 2))),
        1: mgr.constant((1,)),
        2: mgr.constant(()),
    }
    outs = {0: False, 1: False, 2: True}
    return SymbolicNFA(mgr, table.__getitem__, outs.__getitem__,
                       join=lambda u, v: u or v, join_unit=False)


def test_determinise_outputs_and_steps():
    mgr = BddManager(["a"])
    nfa = fixed_nfa(mgr)
    dfa = determinise(nfa)
    assert dfa.o(()) is False
    assert dfa.o((0, 2)) is True
    s = dfa.step((0,), (True,))
    assert s == (1, 2)
    assert dfa.o((1, 2)) is True
    assert dfa.step((1, 2), (True,)) == (1,)
    # empty set is a sink with unit output
    assert dfa.step((), (False,)) == ()


def test_determinise_matches_subset_simulation():
    rng = random.Random(11)
    for trial in range(30):
        mgr = BddManager(["a", "b"])
        states = list(range(4))
        table = {s: random_set_node(rng, mgr, states, 2) for s in states}
        outs = {s: rng.random() < 0.4 for s in states}
        nfa = SymbolicNFA(mgr, table.__getitem__, outs.__getitem__,
                          join=lambda u, v: u or v, join_unit=False)
        dfa = determinise(nfa)
        start = tuple(sorted(rng.sample(states, rng.randrange(1, 4))))
        want = nfa_language_upto(nfa, start, 3)
        got = dfa_language_upto(dfa, start, 3)
        assert got == want


def test_determinise_monotone():
    # larger state sets can only reach larger successor sets
    rng = random.Random(12)
    mgr = BddManager(["a", "b"])
    states = list(range(5))
    table = {s: random_set_node(rng, mgr, states, 2) for s in states}
    nfa = SymbolicNFA(mgr, table.__getitem__, lambda s: False,
                      join=lambda u, v: u or v, join_unit=False)
    dfa = determinise(nfa)
    for _ in range(100):
        small = tuple(sorted(rng.sample(states, 2)))
        big = tuple(sorted(set(small) | set(rng.sample(states, 2))))
        for a in all_letters(mgr):
            assert set(dfa.step(small, a)) <= set(dfa.step(big, a))


def test_reachable_and_dot():
    mgr = BddManager(["a"])
    nfa = fixed_nfa(mgr)
    dfa = determinise(nfa)
    seen = reachable_states(dfa, [(0,)])
    assert (0,) in seen and (1, 2) in seen and (1,) in seen
    dot = dfa_to_dot(dfa, [(0,)])
    assert "digraph" in dot


def test_leaf_values():
    mgr = BddManager(["a"])
    n = mgr.node(0, mgr.constant("x"), mgr.constant("y"))
    assert sorted(leaf_values(n)) == ["x", "y"]


def test_dfa_view_caches_lazily():
    mgr = BddManager(["a"])
    calls = []

    def t(s):
        calls.append(s)
        return mgr.constant(s)

    dfa = SymbolicDFA(mgr, t, lambda s: False)
    dfa.t("u")
    dfa.t("u")
    assert calls == ["u"]
    assert dfa.states_explored == 1
