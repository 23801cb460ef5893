"""HTTP service exposing the checker and the benchmark harness.

The CLI can run against this service instead of computing in-process,
and anything else that speaks JSON can use it directly.  Expressions
travel as concrete syntax and are parsed server-side against the
declared names.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .automata import StateLimitError
from .bench import BenchConfig, BenchRow, bench, csv_text, format_table
from .checker import CheckConfig, CheckError, check
from .parser import ParseError, parse

app = FastAPI(title="katcheck", version=__version__)


class CheckRequest(BaseModel):
    tests: list[str] = Field(default_factory=list)
    letters: list[str]
    left: str
    right: str
    method: str = "brz"
    algo: str = "symb"
    mode: str = "equiv"
    state_cap: int | None = None
    naive_letter_cap: int = 4096


class StatsOut(BaseModel):
    output_tests: int
    pairs_pushed: int
    nodes_visited: int


class CheckResponse(BaseModel):
    holds: bool
    verdict: str
    witness: str | None
    stats: StatsOut
    millis: float
    states_explored: int


class BenchRequest(BaseModel):
    tests: int = 7
    letters: int = 7
    connectives: int = 70
    pairs: int = 100
    saturated: bool = True
    seed: int = 0


class BenchRowOut(BaseModel):
    method: str
    algo: str
    pair_id: int
    verdict: str
    output_tests: int
    pairs_pushed: int
    millis: float


class BenchResponse(BaseModel):
    rows: list[BenchRowOut]
    table: str
    csv: str
    all_equivalent: bool


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=CheckResponse)
def do_check(req: CheckRequest) -> CheckResponse:
    cfg = CheckConfig(tests=list(req.tests), letters=list(req.letters),
                      construction=req.method, algorithm=req.algo,
                      mode=req.mode, state_cap=req.state_cap,
                      naive_letter_cap=req.naive_letter_cap)
    try:
        k1 = parse(req.left, req.tests, req.letters)
        k2 = parse(req.right, req.tests, req.letters)
        res = check(cfg, k1, k2)
    except (ParseError, CheckError, ValueError) as err:
        raise HTTPException(status_code=400, detail=str(err))
    except StateLimitError as err:
        raise HTTPException(status_code=422, detail=str(err))
    return CheckResponse(
        holds=res.holds, verdict=res.verdict_text, witness=res.witness_text,
        stats=StatsOut(output_tests=res.stats.output_tests,
                       pairs_pushed=res.stats.pairs_pushed,
                       nodes_visited=res.stats.nodes_visited),
        millis=res.millis, states_explored=res.states_explored)


@app.post("/bench", response_model=BenchResponse)
def do_bench(req: BenchRequest) -> BenchResponse:
    cfg = BenchConfig(tests=req.tests, letters=req.letters,
                      connectives=req.connectives, pairs=req.pairs,
                      saturated=req.saturated, seed=req.seed)
    try:
        report = bench(cfg)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err))
    rows = [BenchRowOut(method=r.method, algo=r.algo, pair_id=r.pair_id,
                        verdict=r.verdict, output_tests=r.output_tests,
                        pairs_pushed=r.pairs_pushed, millis=r.millis)
            for r in report.rows]
    return BenchResponse(rows=rows, table=format_table(report),
                         csv=csv_text(report),
                         all_equivalent=report.all_equivalent)
