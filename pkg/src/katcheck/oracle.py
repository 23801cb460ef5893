"""Brute-force ground truth for equivalence and inclusion.

The oracle works entirely on the explicit side: states are expressions
with raw test leaves, letters are (atom, letter) pairs, outputs are the
per-atom acceptance vectors.  Nothing symbolic is involved, so
agreement with the symbolic pipelines is meaningful evidence.

Every verdict is double-checked internally before being returned:
claimed counterexamples are replayed through the explicit derivatives,
and claimed equivalences are compared on all guarded strings up to a
small length bound.  A failure of either check raises, because it means
the oracle itself is inconsistent.
"""

from __future__ import annotations

from .equiv import naive_equiv
from .kat import (
    ExplicitDFA,
    KatContext,
    KatExpr,
    delta_alpha_p,
    eps_alpha,
    guarded_strings_upto,
)

CROSS_CHECK_BOUND = 3


class OracleInconsistency(AssertionError):
    pass


def replay_guarded_string(ctx: KatContext, e, u: tuple) -> bool:
    """Membership via iterated explicit derivatives; linear in the string."""
    d = e
    for i in range(len(u) // 2):
        d = delta_alpha_p(ctx, d, u[2 * i], u[2 * i + 1])
    return eps_alpha(ctx, d, u[-1])


def _tuple_leq(u: tuple, v: tuple) -> bool:
    return all(b or not a for a, b in zip(u, v))


def oracle_check(ctx: KatContext, k1: KatExpr, k2: KatExpr,
                 mode: str = "equiv"):
    """Decide ``k1 ~ k2`` by naive exploration of explicit derivatives.

    Returns (holds, witness) where the witness is a guarded string
    accepted by exactly one side (for inclusion: by the left side only).
    """
    x, y = ctx.explicit(k1), ctx.explicit(k2)
    dfa = ExplicitDFA(ctx)
    compare = _tuple_leq if mode == "incl" else lambda u, v: u == v
    verdict = naive_equiv(dfa.t, dfa.o, dfa.letters, x, y, compare=compare)

    if verdict.holds:
        lx = guarded_strings_upto(ctx, x, CROSS_CHECK_BOUND)
        ly = guarded_strings_upto(ctx, y, CROSS_CHECK_BOUND)
        ok = lx <= ly if mode == "incl" else lx == ly
        if not ok:
            raise OracleInconsistency(
                "derivative exploration and bounded languages disagree")
        return True, None

    # rebuild the failing guarded string from the failing pair's outputs
    out1, out2 = verdict.outputs
    atom = next(a for a, (b1, b2) in zip(ctx.atoms, zip(out1, out2))
                if not compare((b1,), (b2,)))
    u = tuple(part for step in verdict.witness for part in step) + (atom,)
    in_x, in_y = replay_guarded_string(ctx, x, u), replay_guarded_string(
        ctx, y, u)
    bad = (not in_x or in_y) if mode == "incl" else in_x == in_y
    if bad:
        raise OracleInconsistency("claimed witness does not distinguish")
    return False, u
