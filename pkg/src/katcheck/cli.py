"""Command-line front end.

``kat check`` decides equivalence or inclusion of two expressions,
``kat bench`` runs the saturated-pair benchmark, ``kat serve`` starts
the HTTP service.  Both check and bench accept ``--server URL`` to act
as thin clients of a running service instead of computing in-process.

Exit codes for check: 0 the property holds, 1 it does not, 2 errors
(syntax, configuration, resource caps).
"""

from __future__ import annotations

import sys

import click

from .automata import StateLimitError
from .bench import BenchConfig, bench, csv_text, format_table
from .checker import CheckConfig, CheckError, check
from .parser import ParseError, parse


def _split_names(raw: str) -> list[str]:
    return [part for part in (s.strip() for s in raw.split(",")) if part]


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Equivalence and inclusion of KAT expressions via symbolic automata."""


@main.command("check")
@click.option("--tests", default="", help="Comma-separated test names.")
@click.option("--letters", required=True, help="Comma-separated letter names.")
@click.option("--method", type=click.Choice(["brz", "ant", "iy"]),
              default="brz", show_default=True,
              help="Automaton construction.")
@click.option("--algo", type=click.Choice(["naive", "symb", "dsf"]),
              default="symb", show_default=True,
              help="Equivalence algorithm.")
@click.option("--mode", type=click.Choice(["equiv", "incl"]),
              default="equiv", show_default=True)
@click.option("--stats", is_flag=True, help="Print exploration statistics.")
@click.option("--state-cap", type=int, default=None,
              help="Abort after unfolding this many states.")
@click.option("--naive-letter-cap", type=int, default=4096, show_default=True,
              help="Refuse naive runs needing more explicit letters.")
@click.option("--server", default=None, metavar="URL",
              help="Delegate to a running katcheck service.")
@click.argument("left")
@click.argument("right")
def check_cmd(tests, letters, method, algo, mode, stats, state_cap,
              naive_letter_cap, server, left, right):
    """Decide LEFT ~ RIGHT (equivalence or inclusion)."""
    test_names = _split_names(tests)
    letter_names = _split_names(letters)

    if server is not None:
        payload = {"tests": test_names, "letters": letter_names,
                   "left": left, "right": right, "method": method,
                   "algo": algo, "mode": mode, "state_cap": state_cap,
                   "naive_letter_cap": naive_letter_cap}
        body = _post(server, "/check", payload)
        _print_verdict(body["verdict"], body["witness"],
                       body["stats"] if stats else None,
                       body["millis"], body["states_explored"])
        sys.exit(0 if body["holds"] else 1)

    cfg = CheckConfig(tests=test_names, letters=letter_names,
                      construction=method, algorithm=algo, mode=mode,
                      state_cap=state_cap, naive_letter_cap=naive_letter_cap)
    try:
        k1 = parse(left, test_names, letter_names)
        k2 = parse(right, test_names, letter_names)
        res = check(cfg, k1, k2)
    except (ParseError, CheckError, ValueError) as err:
        _fail(str(err))
    except StateLimitError as err:
        _fail(str(err))
    _print_verdict(res.verdict_text, res.witness_text,
                   _stats_dict(res) if stats else None,
                   res.millis, res.states_explored)
    sys.exit(0 if res.holds else 1)


def _stats_dict(res):
    return {"output_tests": res.stats.output_tests,
            "pairs_pushed": res.stats.pairs_pushed,
            "nodes_visited": res.stats.nodes_visited}


def _print_verdict(verdict, witness, stats, millis, states):
    click.echo(verdict)
    if witness:
        click.echo(f"counter-example: {witness}")
    if stats is not None:
        click.echo(f"output_tests={stats['output_tests']} "
                   f"pairs_pushed={stats['pairs_pushed']} "
                   f"nodes_visited={stats['nodes_visited']} "
                   f"states={states} millis={millis:.2f}")


@main.command("bench")
@click.option("--tests", type=int, default=7, show_default=True,
              help="Number of primitive tests.")
@click.option("--letters", type=int, default=7, show_default=True,
              help="Number of letters.")
@click.option("--connectives", type=int, default=70, show_default=True)
@click.option("--pairs", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--no-saturate", is_flag=True,
              help="Compare the raw random pairs instead.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write per-pair rows as CSV.")
@click.option("--server", default=None, metavar="URL",
              help="Delegate to a running katcheck service.")
def bench_cmd(tests, letters, connectives, pairs, seed, no_saturate, out,
              server):
    """Check random saturated pairs across all six construction/algorithm
    cells and report output-test totals."""
    if server is not None:
        payload = {"tests": tests, "letters": letters,
                   "connectives": connectives, "pairs": pairs,
                   "saturated": not no_saturate, "seed": seed}
        body = _post(server, "/bench", payload)
        click.echo(body["table"])
        if out:
            with open(out, "w") as fh:
                fh.write(body["csv"])
            click.echo(f"wrote {out}")
        return

    cfg = BenchConfig(tests=tests, letters=letters, connectives=connectives,
                      pairs=pairs, saturated=not no_saturate, seed=seed)
    try:
        report = bench(cfg)
    except ValueError as err:
        _fail(str(err))
    click.echo(format_table(report))
    if out:
        with open(out, "w") as fh:
            fh.write(csv_text(report))
        click.echo(f"wrote {out}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


def _post(server: str, path: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + path
    try:
        resp = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as err:
        _fail(f"cannot reach {url}: {err}")
    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text) \
            if resp.headers.get("content-type", "").startswith("application/json") \
            else resp.text
        _fail(f"server rejected the request: {detail}")
    return resp.json()


if __name__ == "__main__":
    main()
