"""Benchmark harness: equivalence checking on random saturated pairs.

Generates seeded random expressions, saturates each with the full
alphabet loop so every pair is equivalent (the algorithms then have to
explore everything instead of bailing at the first difference), and runs
the six construction/algorithm cells: {brz, ant, iy} x {symb, dsf}.

The headline metric is the total number of output tests, which counts
algorithmic work independently of hardware; wall-clock milliseconds are
reported alongside.  Rows go out as CSV, aggregates as a small table.

Brzozowski derivatives can blow up where the set-based machines stay
small, so the brz cells run under a state cap of ten times whatever the
Antimirov run of the same pair explored; a capped cell reports the
verdict "Capped" instead of failing the whole run.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field

from .automata import StateLimitError
from .checker import CheckConfig, check
from .kat import KatContext
from .randexpr import random_expr, saturate

CELLS = (("brz", "symb"), ("brz", "dsf"),
         ("ant", "symb"), ("ant", "dsf"),
         ("iy", "symb"), ("iy", "dsf"))

BRZ_CAP_FACTOR = 10
BRZ_CAP_FLOOR = 64

_TEST_POOL = "abcdefghijklm"
_LETTER_POOL = "nopqrstuvwxyz"


def bench_names(n_tests: int, n_letters: int) -> tuple[list[str], list[str]]:
    tests = ([c for c in _TEST_POOL[:n_tests]] if n_tests <= len(_TEST_POOL)
             else [f"t{i}" for i in range(n_tests)])
    letters = ([c for c in _LETTER_POOL[:n_letters]]
               if n_letters <= len(_LETTER_POOL)
               else [f"p{i}" for i in range(n_letters)])
    return tests, letters


@dataclass
class BenchConfig:
    tests: int = 7
    letters: int = 7
    connectives: int = 70
    pairs: int = 100
    saturated: bool = True
    seed: int = 0

    def validate(self) -> None:
        if min(self.tests, self.letters, self.pairs) < 1 or self.connectives < 0:
            raise ValueError("bench needs positive sizes")


@dataclass
class BenchRow:
    method: str
    algo: str
    pair_id: int
    verdict: str
    output_tests: int
    pairs_pushed: int
    millis: float


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list[BenchRow] = field(default_factory=list)

    def cell(self, method: str, algo: str) -> list[BenchRow]:
        return [r for r in self.rows if r.method == method and r.algo == algo]

    def totals(self) -> dict:
        out = {}
        for method, algo in CELLS:
            rows = self.cell(method, algo)
            out[method, algo] = {
                "pairs": len(rows),
                "equivalent": sum(r.verdict == "Equivalent" for r in rows),
                "capped": sum(r.verdict == "Capped" for r in rows),
                "output_tests": sum(r.output_tests for r in rows),
                "pairs_pushed": sum(r.pairs_pushed for r in rows),
                "millis": sum(r.millis for r in rows),
            }
        return out

    @property
    def all_equivalent(self) -> bool:
        return all(r.verdict == "Equivalent" for r in self.rows)


def bench(cfg: BenchConfig, progress=None) -> BenchReport:
    cfg.validate()
    tests, letters = bench_names(cfg.tests, cfg.letters)
    ctx = KatContext(tests, letters)
    rng = random.Random(cfg.seed)
    report = BenchReport(cfg)

    for pair_id in range(cfg.pairs):
        x = random_expr(rng, tests, letters, cfg.connectives)
        y = random_expr(rng, tests, letters, cfg.connectives)
        if cfg.saturated:
            x, y = saturate(x, letters), saturate(y, letters)

        # Antimirov first: its explored-state count bounds the brz cap
        results = {}
        ant_states = 0
        for method in ("ant", "iy", "brz"):
            cap = None
            if method == "brz":
                cap = max(BRZ_CAP_FACTOR * ant_states, BRZ_CAP_FLOOR)
            for algo in ("symb", "dsf"):
                row, states = _run_cell(ctx, tests, letters, method, algo,
                                        cap, pair_id, x, y)
                results[method, algo] = row
                if method == "ant":
                    ant_states = max(ant_states, states)
        for method, algo in CELLS:
            report.rows.append(results[method, algo])
        if progress is not None:
            progress(pair_id + 1, cfg.pairs)
    return report


def _run_cell(ctx, tests, letters, method, algo, cap, pair_id, x, y):
    ccfg = CheckConfig(tests=tests, letters=letters, construction=method,
                       algorithm=algo, state_cap=cap)
    started = time.perf_counter()
    try:
        res = check(ccfg, x, y, ctx=ctx)
    except StateLimitError:
        millis = (time.perf_counter() - started) * 1000.0
        return BenchRow(method, algo, pair_id, "Capped", 0, 0, millis), 0
    row = BenchRow(method, algo, pair_id, res.verdict_text,
                   res.stats.output_tests, res.stats.pairs_pushed,
                   res.millis)
    return row, res.states_explored


def write_csv(report: BenchReport, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(["method", "algo", "pair_id", "verdict",
                     "output_tests", "pairs_pushed", "millis"])
    for r in report.rows:
        writer.writerow([r.method, r.algo, r.pair_id, r.verdict,
                         r.output_tests, r.pairs_pushed, f"{r.millis:.3f}"])


def csv_text(report: BenchReport) -> str:
    buf = io.StringIO()
    write_csv(report, buf)
    return buf.getvalue()


def format_table(report: BenchReport) -> str:
    totals = report.totals()
    head = f"{'method':<8}{'algo':<7}{'pairs':>6}{'equal':>7}" \
           f"{'capped':>8}{'output_tests':>14}{'millis':>12}"
    lines = [head, "-" * len(head)]
    for method, algo in CELLS:
        t = totals[method, algo]
        lines.append(f"{method:<8}{algo:<7}{t['pairs']:>6}"
                     f"{t['equivalent']:>7}{t['capped']:>8}"
                     f"{t['output_tests']:>14}{t['millis']:>12.1f}")
    cfg = report.config
    lines.append(f"seed={cfg.seed} tests={cfg.tests} letters={cfg.letters} "
                 f"connectives={cfg.connectives} pairs={cfg.pairs} "
                 f"saturated={cfg.saturated}")
    return "\n".join(lines)
