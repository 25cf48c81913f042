"""Command-line interface.

Exit codes: 0 = positive answer / success, 1 = negative answer
(NOT-SUBSUMED / UNSATISFIABLE), 2 = usage, parse, or signature error.

``check`` and ``validate`` can also run as thin clients against a
running HTTP service (``--server``); all other subcommands operate
locally.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import formats, intervals
from . import normalize as norm
from .bench import CorpusError, gen_corpus, run_bench
from .engine import Engine, options_for
from .model import SignatureError
from .oracle import compile_oracle, single_atom_transform


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise click.ClickException(str(exc)) from exc


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


def _engine(kb_path, ontology_path, compiled, opt, splitter) -> Engine:
    kb = formats.parse_kb(_read(kb_path))
    options = options_for(opt, splitter)
    if ontology_path is None:
        return Engine(kb, options)
    onto = formats.parse_ontology(_read(ontology_path))
    if compiled:
        return Engine(compile_oracle(kb, onto), options)
    return Engine.with_oracle(kb, onto, options)


@click.group()
def main() -> None:
    """Policy-logic reasoner: subsumption and satisfiability of
    data-usage policies against a PL knowledge base."""


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", type=click.Path())
@click.option("--compile", "compiled", is_flag=True,
              help="Compile the ontology into the KB instead of querying "
                   "it as an oracle.")
@click.option("--lhs", required=True, type=click.Path())
@click.option("--rhs", required=True, type=click.Path())
@click.option("--opt", default="plain",
              type=click.Choice(["plain", "c", "2n", "c2n", "pre", "pre2n"]))
@click.option("--splitter", default="naive",
              type=click.Choice(["naive", "refined"]))
@click.option("--server", help="URL of a running service to query.")
def check(kb_path, ontology_path, compiled, lhs, rhs, opt, splitter, server):
    """Decide lhs ⊑ rhs; prints SUBSUMED or NOT-SUBSUMED."""
    try:
        if server:
            import httpx

            resp = httpx.post(f"{server.rstrip('/')}/check", json={
                "kb": _read(kb_path),
                "ontology": _read(ontology_path) if ontology_path else None,
                "compile_oracle": compiled,
                "lhs": _read(lhs), "rhs": _read(rhs),
                "opt": opt, "splitter": splitter})
            if resp.status_code != 200:
                _fail(RuntimeError(f"server error: {resp.text}"))
            answer = resp.json()["subsumed"]
        else:
            engine = _engine(kb_path, ontology_path, compiled, opt, splitter)
            answer = engine.check(formats.parse_policy(_read(lhs)),
                                  formats.parse_policy(_read(rhs)))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        _fail(exc)
    click.echo("SUBSUMED" if answer else "NOT-SUBSUMED")
    sys.exit(0 if answer else 1)


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", type=click.Path())
@click.option("--policy", "policy_path", required=True, type=click.Path())
@click.option("--server", help="URL of a running service to query.")
def validate(kb_path, ontology_path, policy_path, server):
    """Satisfiability of a policy, per disjunct and overall."""
    try:
        if server:
            import httpx

            resp = httpx.post(f"{server.rstrip('/')}/validate", json={
                "kb": _read(kb_path),
                "ontology": _read(ontology_path) if ontology_path else None,
                "policy": _read(policy_path)})
            if resp.status_code != 200:
                _fail(RuntimeError(f"server error: {resp.text}"))
            body = resp.json()
            per, overall = body["per_disjunct"], body["satisfiable"]
        else:
            engine = _engine(kb_path, ontology_path, False, "plain", "naive")
            policy = formats.parse_policy(_read(policy_path))
            per = [not norm.normalize_simple(engine.mode, d).bottom
                   for d in policy.disjuncts]
            overall = any(per)
    except (formats.ParseError, SignatureError, ValueError) as exc:
        _fail(exc)
    for i, ok in enumerate(per, start=1):
        click.echo(f"disjunct {i}: "
                   + ("SATISFIABLE" if ok else "UNSATISFIABLE"))
    click.echo("overall: " + ("SATISFIABLE" if overall else "UNSATISFIABLE"))
    sys.exit(0 if overall else 1)


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", type=click.Path())
@click.option("--policy", "policy_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path())
def normalize(kb_path, ontology_path, policy_path, out_path):
    """Emit the normalized policy."""
    try:
        engine = _engine(kb_path, ontology_path, False, "plain", "naive")
        policy = formats.parse_policy(_read(policy_path))
        out = formats.serialize_policy(
            norm.normalize_full(engine.mode, policy))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        _fail(exc)
    if out_path:
        Path(out_path).write_text(out)
    else:
        click.echo(out, nl=False)


@main.command()
@click.option("--lhs", required=True, type=click.Path())
@click.option("--rhs", required=True, type=click.Path())
@click.option("--splitter", default="naive",
              type=click.Choice(["naive", "refined"]))
@click.option("--out", "out_path", type=click.Path())
def split(lhs, rhs, splitter, out_path):
    """Emit the lhs policy split against the rhs endpoints."""
    try:
        c = formats.parse_policy(_read(lhs))
        d = formats.parse_policy(_read(rhs))
        splitfn = (intervals.split_refined if splitter == "refined"
                   else intervals.split_naive)
        out = formats.serialize_policy(splitfn(c, d))
    except (formats.ParseError, ValueError) as exc:
        _fail(exc)
    if out_path:
        Path(out_path).write_text(out)
    else:
        click.echo(out, nl=False)


@main.command(name="compile")
@click.option("--kb", "kb_path", required=True, type=click.Path())
@click.option("--ontology", "ontology_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path())
def compile_cmd(kb_path, ontology_path, out_path):
    """Compile the ontology into a plain knowledge base."""
    try:
        kb = formats.parse_kb(_read(kb_path))
        onto = formats.parse_ontology(_read(ontology_path))
        out = formats.serialize_kb(compile_oracle(kb, onto))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        _fail(exc)
    if out_path:
        Path(out_path).write_text(out)
    else:
        click.echo(out, nl=False)


@main.command(name="single-atom")
@click.option("--policy", "policy_paths", required=True, multiple=True,
              type=click.Path())
@click.option("--out-dir", "out_dir", type=click.Path())
@click.option("--out-ontology", "out_onto", type=click.Path())
def single_atom(policy_paths, out_dir, out_onto):
    """Rewrite policies into single-atom form, emitting the definitions
    as an ontology."""
    try:
        policies = [formats.parse_policy(_read(p)) for p in policy_paths]
        out, o_star = single_atom_transform(policies)
    except (formats.ParseError, ValueError) as exc:
        _fail(exc)
    texts = [formats.serialize_policy(p) for p in out]
    onto_text = formats.serialize_ontology(o_star)
    if out_dir:
        outd = Path(out_dir)
        outd.mkdir(parents=True, exist_ok=True)
        for src, text in zip(policy_paths, texts):
            (outd / Path(src).name).write_text(text)
        (outd / "definitions.onto").write_text(onto_text)
    else:
        for text in texts:
            click.echo(text, nl=False)
            click.echo("---")
        click.echo(onto_text, nl=False)
    if out_onto:
        Path(out_onto).write_text(onto_text)


@main.command()
@click.option("--profile", required=True,
              type=click.Choice(["pxs", "tr", "O1", "O2", "O3"]))
@click.option("--policies", default="P1", type=click.Choice(["P1", "P2"]))
@click.option("--seed", default=1, type=int)
@click.option("--count", default=None, type=int,
              help="Policy count for the fully synthetic profiles.")
@click.option("--out", "out_dir", required=True, type=click.Path())
def gen(profile, policies, seed, count, out_dir):
    """Generate a benchmark corpus."""
    try:
        gen_corpus(out_dir, profile, policies, seed, count=count)
    except (CorpusError, ValueError) as exc:
        _fail(exc)
    click.echo(f"corpus written to {out_dir}")


@main.command()
@click.option("--corpus", "corpus_dir", required=True, type=click.Path())
@click.option("--opt", default="c",
              type=click.Choice(["plain", "c", "2n", "c2n", "pre", "pre2n"]))
@click.option("--splitter", default="naive",
              type=click.Choice(["naive", "refined"]))
@click.option("--repeat", default=3, type=int)
@click.option("--timeout-ms", default=None, type=float)
@click.option("--out", "out_path", required=True, type=click.Path())
def bench(corpus_dir, opt, splitter, repeat, timeout_ms, out_path):
    """Run a benchmark corpus and write the report CSV."""
    try:
        report = run_bench(corpus_dir, opt, splitter, repeat, timeout_ms)
    except (CorpusError, formats.ParseError, ValueError) as exc:
        _fail(exc)
    report.write_csv(out_path)
    stats = report.group_stats()
    for ni in sorted(stats):
        s = stats[ni]
        click.echo(f"n_i={ni}: {s['count']} queries, "
                   f"median {s['median_ns'] / 1e6:.3f} ms, "
                   f"p90 {s['p90_ns'] / 1e6:.3f} ms")
    if report.cache_hit_rate is not None:
        click.echo(f"pre-split cache hit rate: {report.cache_hit_rate:.2%}")
    click.echo(f"report written to {out_path}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
