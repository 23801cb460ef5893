"""Benchmark harness tests.

The real corpus (7 tests, 7 letters, 70 connectives, 100 pairs) is
exercised by the acceptance suite; here we use small configurations so
every structural property of the report stays cheap to check.
"""

import csv
import io

import pytest

from katcheck.bench import (BRZ_CAP_FLOOR, CELLS, BenchConfig, BenchRow,
                            bench, bench_names, csv_text, format_table,
                            write_csv, _run_cell)
from katcheck.kat import KatContext
from katcheck.randexpr import random_expr, saturate

import random


SMALL = dict(tests=3, letters=3, connectives=8, pairs=4, seed=11)


@pytest.fixture(scope="module")
def small_report():
    return bench(BenchConfig(**SMALL))


def test_cells_enumerate_all_combinations():
    assert len(CELLS) == 6
    assert set(CELLS) == {(m, a) for m in ("brz", "ant", "iy")
                          for a in ("symb", "dsf")}


def test_row_counts(small_report):
    assert len(small_report.rows) == 6 * SMALL["pairs"]
    for method, algo in CELLS:
        rows = small_report.cell(method, algo)
        assert [r.pair_id for r in rows] == list(range(SMALL["pairs"]))
        assert all(r.method == method and r.algo == algo for r in rows)


def test_saturated_corpus_is_all_equivalent(small_report):
    # saturation adds the full-alphabet loop to both sides, so every
    # cell must answer Equivalent
    assert small_report.all_equivalent
    assert all(r.verdict == "Equivalent" for r in small_report.rows)


def test_same_seed_same_rows(small_report):
    again = bench(BenchConfig(**SMALL))
    for a, b in zip(small_report.rows, again.rows):
        assert (a.method, a.algo, a.pair_id) == (b.method, b.algo, b.pair_id)
        assert a.verdict == b.verdict
        assert a.output_tests == b.output_tests
        assert a.pairs_pushed == b.pairs_pushed


def test_dsf_needs_no_more_output_tests_than_symb(small_report):
    for method in ("brz", "ant", "iy"):
        symb = small_report.cell(method, "symb")
        dsf = small_report.cell(method, "dsf")
        for s, d in zip(symb, dsf):
            assert d.output_tests <= s.output_tests


def test_unsaturated_pairs_mostly_differ():
    cfg = BenchConfig(tests=2, letters=2, connectives=6, pairs=6,
                      saturated=False, seed=3)
    report = bench(cfg)
    verdicts = {r.verdict for r in report.rows}
    assert "NotEquivalent" in verdicts
    # cells agree pairwise on each verdict
    for pair_id in range(cfg.pairs):
        got = {r.verdict for r in report.rows if r.pair_id == pair_id}
        assert len(got) == 1


def test_totals_arithmetic(small_report):
    totals = small_report.totals()
    for method, algo in CELLS:
        rows = small_report.cell(method, algo)
        t = totals[method, algo]
        assert t["pairs"] == len(rows)
        assert t["equivalent"] == sum(r.verdict == "Equivalent" for r in rows)
        assert t["capped"] == 0
        assert t["output_tests"] == sum(r.output_tests for r in rows)
        assert t["pairs_pushed"] == sum(r.pairs_pushed for r in rows)


def test_progress_callback():
    seen = []
    bench(BenchConfig(tests=2, letters=2, connectives=4, pairs=3, seed=0),
          progress=lambda done, total: seen.append((done, total)))
    assert seen == [(1, 3), (2, 3), (3, 3)]


def test_csv_round_trip(small_report):
    text = csv_text(small_report)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["method", "algo", "pair_id", "verdict",
                       "output_tests", "pairs_pushed", "millis"]
    assert len(rows) == 1 + len(small_report.rows)
    for parsed, row in zip(rows[1:], small_report.rows):
        assert parsed[0] == row.method
        assert parsed[1] == row.algo
        assert int(parsed[2]) == row.pair_id
        assert parsed[3] == row.verdict
        assert int(parsed[4]) == row.output_tests
        assert int(parsed[5]) == row.pairs_pushed
        float(parsed[6])


def test_write_csv_matches_csv_text(small_report):
    buf = io.StringIO()
    write_csv(small_report, buf)
    assert buf.getvalue() == csv_text(small_report)


def test_format_table(small_report):
    table = format_table(small_report)
    lines = table.splitlines()
    assert lines[0].split() == ["method", "algo", "pairs", "equal",
                                "capped", "output_tests", "millis"]
    # one line per cell plus header, rule and config footer
    assert len(lines) == 2 + len(CELLS) + 1
    for method, algo in CELLS:
        assert any(line.startswith(method) and algo in line
                   for line in lines[2:-1])
    assert f"seed={SMALL['seed']}" in lines[-1]
    assert "pairs=4" in lines[-1]


@pytest.mark.parametrize("bad", [
    dict(tests=0), dict(letters=0), dict(pairs=0), dict(connectives=-1),
])
def test_config_validation(bad):
    cfg = BenchConfig(**{**SMALL, **bad})
    with pytest.raises(ValueError):
        cfg.validate()


def test_bench_names_pools():
    tests, letters = bench_names(7, 7)
    assert tests == list("abcdefg")
    assert letters == list("nopqrst")
    assert not set(tests) & set(letters)


def test_bench_names_fallback():
    tests, letters = bench_names(14, 15)
    assert tests == [f"t{i}" for i in range(14)]
    assert letters == [f"p{i}" for i in range(15)]
    # pool edge: 13 of each still fits
    tests13, letters13 = bench_names(13, 13)
    assert tests13[-1] == "m" and letters13[-1] == "z"


def test_capped_cell_row():
    tests, letters = bench_names(2, 2)
    ctx = KatContext(tests, letters)
    rng = random.Random(5)
    x = saturate(random_expr(rng, tests, letters, 10), letters)
    y = saturate(random_expr(rng, tests, letters, 10), letters)
    row, states = _run_cell(ctx, tests, letters, "brz", "symb", 1, 9, x, y)
    assert isinstance(row, BenchRow)
    assert row.verdict == "Capped"
    assert row.pair_id == 9
    assert row.output_tests == 0 and row.pairs_pushed == 0
    assert states == 0


def test_brz_cap_floor_generous_for_small_pairs(small_report):
    # at this scale the floor (not the antimirov multiple) is the cap,
    # and nothing got anywhere near it
    assert BRZ_CAP_FLOOR == 64
    assert all(r.verdict != "Capped" for r in small_report.cell("brz", "symb"))
