"""End-to-end equivalence and inclusion checking.

A check picks one construction (brz: Brzozowski derivatives, ant:
Antimirov partial derivatives plus subset construction, iy: the
linear-size graph construction with epsilon elimination) and one
algorithm (naive: explicit-alphabet exploration, symb: coinduction with
diagram pairing, dsf: coinduction fused with a union-find forest) and
runs them on two parsed expressions.

Counterexamples are returned as guarded strings.  The algorithms find
symbolic words (sequences of partial literal constraints); the checker
concretises those into atoms and declared letters, finds a
distinguishing final atom from the failing outputs, and replays the
string through the explicit derivatives as a last line of defence.

Inclusion under dsf needs care: the forest merges equivalence classes,
which is symmetric, so one-sided output comparison would be unsound
there.  Instead x <= y is decided as x + y == y, whose counterexamples
are exactly the inclusion counterexamples (strings of x outside y).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .automata import all_letters
from .bdd import Node
from .construct import (
    antimirov_automaton,
    brz_automaton,
    iy_automaton,
    star_normalise,
)
from .equiv import Stats, Verdict, dsf_equiv, naive_equiv, symb_equiv, symb_incl
from .kat import KatContext, KatExpr
from .oracle import replay_guarded_string

CONSTRUCTIONS = ("brz", "ant", "iy")
ALGORITHMS = ("naive", "symb", "dsf")
MODES = ("equiv", "incl")


class CheckError(ValueError):
    """Bad configuration or a resource cap hit before an answer."""


class WitnessError(AssertionError):
    """A produced counterexample failed its replay; indicates a bug."""


@dataclass
class CheckConfig:
    tests: list
    letters: list
    construction: str = "brz"
    algorithm: str = "symb"
    mode: str = "equiv"
    state_cap: int | None = None
    naive_letter_cap: int = 4096

    def validate(self) -> None:
        if self.construction not in CONSTRUCTIONS:
            raise CheckError(f"unknown construction {self.construction!r}")
        if self.algorithm not in ALGORITHMS:
            raise CheckError(f"unknown algorithm {self.algorithm!r}")
        if self.mode not in MODES:
            raise CheckError(f"unknown mode {self.mode!r}")
        if not self.letters:
            raise CheckError("at least one letter is required")


@dataclass
class CheckResult:
    holds: bool
    mode: str
    construction: str
    algorithm: str
    witness: tuple | None
    witness_text: str | None
    stats: Stats
    millis: float
    states_explored: int
    raw: Verdict

    @property
    def verdict_text(self) -> str:
        if self.holds:
            return "Included" if self.mode == "incl" else "Equivalent"
        return "NotIncluded" if self.mode == "incl" else "NotEquivalent"


# -- witness reconstruction ---------------------------------------------------


def _has_truthy(node: Node, memo: dict) -> bool:
    hit = memo.get(node.uid)
    if hit is None:
        if node.is_leaf:
            hit = bool(node.value)
        else:
            hit = _has_truthy(node.lo, memo) or _has_truthy(node.hi, memo)
        memo[node.uid] = hit
    return hit


def truthy_assignment(node: Node, num_vars: int):
    """Some full assignment reaching a truthy leaf, or None.  Unmentioned
    variables default to False."""
    memo: dict = {}
    if not _has_truthy(node, memo):
        return None
    out = [False] * num_vars
    while not node.is_leaf:
        if _has_truthy(node.lo, memo):
            node = node.lo
        else:
            out[node.var] = True
            node = node.hi
    return tuple(out)


def _atom_of_assignment(ctx: KatContext, assignment) -> tuple:
    return tuple(assignment[:len(ctx.tests)])


def _letter_of_assignment(ctx: KatContext, assignment):
    code = tuple(assignment[len(ctx.tests):])
    for p, c in ctx.code.items():
        if c == code:
            return p
    return None


def _concretise_step(ctx: KatContext, literals) -> tuple:
    """Turn one symbolic letter (a set of variable constraints) into an
    (atom, letter) pair consistent with it."""
    base = len(ctx.tests)
    atom = [False] * base
    code_bits = {}
    for var, polarity in literals:
        if var < base:
            atom[var] = polarity
        else:
            code_bits[var - base] = polarity
    for p in ctx.letters:
        code = ctx.code[p]
        if all(code[j] == want for j, want in code_bits.items()):
            return tuple(atom), p
    raise WitnessError("symbolic step matches no declared letter")


def rebuild_witness(ctx: KatContext, algorithm: str, mode: str,
                    verdict: Verdict) -> tuple:
    """Guarded string from a failed run: concretise each step of the
    symbolic word and pick a final atom on which the outputs differ."""
    mgr = ctx.manager
    steps = []
    for step in verdict.witness:
        if algorithm == "naive":
            atom = _atom_of_assignment(ctx, step)
            p = _letter_of_assignment(ctx, step)
            if p is None:
                raise WitnessError("witness step uses an unused letter code")
            steps.append((atom, p))
        else:
            steps.append(_concretise_step(ctx, step))
    o1, o2 = verdict.outputs
    if mode == "incl":
        diff = mgr.apply(lambda a, b: a and not b, o1, o2, tag="and_not")
    else:
        diff = mgr.apply(lambda a, b: a != b, o1, o2, tag="xor")
    assignment = truthy_assignment(diff, len(ctx.tests))
    if assignment is None:
        raise WitnessError("failing outputs do not differ on any atom")
    flat = [x for step in steps for x in step]
    return tuple(flat) + (assignment,)


def render_gs(ctx: KatContext, u: tuple) -> str:
    """Human-readable guarded string: atoms in brackets, letters bare."""
    parts = []
    for i, item in enumerate(u):
        if i % 2 == 0:
            bits = " ".join(("+" if v else "-") + name
                            for name, v in zip(ctx.tests, item))
            parts.append(f"[{bits}]" if bits else "[]")
        else:
            parts.append(item)
    return " ".join(parts)


# -- the check itself ------------------------------------------------------------


def check(cfg: CheckConfig, k1: KatExpr, k2: KatExpr,
          ctx: KatContext | None = None) -> CheckResult:
    cfg.validate()
    if ctx is None:
        ctx = KatContext(cfg.tests, cfg.letters)
    elif ctx.tests != list(cfg.tests) or ctx.letters != list(cfg.letters):
        raise CheckError("supplied context does not match the config")
    mgr = ctx.manager

    e1, e2 = ctx.compile(k1), ctx.compile(k2)
    if cfg.construction == "iy":
        e1, e2 = star_normalise(ctx, e1), star_normalise(ctx, e2)

    # the union-find forest merges classes symmetrically, so realise
    # inclusion as the equivalence x + y == y
    algo_mode = cfg.mode
    if cfg.mode == "incl" and cfg.algorithm == "dsf":
        e1, e2 = ctx.sym.sum_([e1, e2]), e2
        algo_mode = "equiv"

    started = time.perf_counter()
    if cfg.construction == "brz":
        dfa = brz_automaton(ctx, cfg.state_cap)
        s1, s2 = e1, e2
    elif cfg.construction == "ant":
        dfa = antimirov_automaton(ctx, cfg.state_cap)
        s1, s2 = (e1,), (e2,)
    else:
        dfa, (s1, s2) = iy_automaton(ctx, [e1, e2], cfg.state_cap)

    if cfg.algorithm == "naive":
        letters = all_letters(mgr)
        if len(letters) > cfg.naive_letter_cap:
            raise CheckError(
                f"naive algorithm needs {len(letters)} explicit letters, "
                f"cap is {cfg.naive_letter_cap}")
        compare = mgr.implies if algo_mode == "incl" else None
        if compare is None:
            verdict = naive_equiv(dfa.step, dfa.o, letters, s1, s2)
        else:
            verdict = naive_equiv(dfa.step, dfa.o, letters, s1, s2,
                                  compare=compare)
    elif cfg.algorithm == "symb":
        if algo_mode == "incl":
            verdict = symb_incl(dfa, s1, s2, leq=mgr.implies)
        else:
            verdict = symb_equiv(dfa, s1, s2)
    else:
        verdict = dsf_equiv(dfa, s1, s2)
    millis = (time.perf_counter() - started) * 1000.0

    witness = None
    witness_text = None
    if not verdict.holds:
        witness = rebuild_witness(ctx, cfg.algorithm, algo_mode, verdict)
        witness_text = render_gs(ctx, witness)
        _replay(ctx, cfg.mode, k1, k2, witness)

    return CheckResult(
        holds=verdict.holds, mode=cfg.mode, construction=cfg.construction,
        algorithm=cfg.algorithm, witness=witness, witness_text=witness_text,
        stats=verdict.stats, millis=millis,
        states_explored=dfa.states_explored, raw=verdict)


def _replay(ctx: KatContext, mode: str, k1: KatExpr, k2: KatExpr,
            u: tuple) -> None:
    in1 = replay_guarded_string(ctx, ctx.explicit(k1), u)
    in2 = replay_guarded_string(ctx, ctx.explicit(k2), u)
    if mode == "incl":
        ok = in1 and not in2
    else:
        ok = in1 != in2
    if not ok:
        raise WitnessError(
            f"witness replay failed: left={in1} right={in2} mode={mode}")
