"""Command line interface: index, query, eval, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .clients import HashEmbedder
from .config import AppConfig, build_engine
from .corpus import load_corpus
from .engine import TurnError
from .evalharness import ContainmentJudge, load_mcq_items, load_oe_items, run_grid
from .retrieval import RetrievalStrategy, build_indices, save_indices


@click.group()
def main() -> None:
    """Multi-path retrieval-augmented disaster question answering."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path(), help="Snapshot path")
def index(config_path: str, out_path: str | None) -> None:
    """Build retrieval indices from the configured corpus and persist them."""
    config = AppConfig.load(config_path)
    if not config.corpus_path:
        raise click.ClickException("config has no corpus path")
    corpus = load_corpus(config.corpus_path)
    bundle = build_indices(corpus, HashEmbedder(dim=config.embedding_dim))
    target = out_path or config.index_snapshot
    if not target:
        raise click.ClickException("no snapshot path (set --out or index_snapshot)")
    save_indices(bundle, target)
    click.echo(f"indexed {corpus.count} passages -> {target}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.argument("text")
def query(config_path: str, text: str) -> None:
    """Run a single query and print the answer with its pathway trace."""
    engine = build_engine(AppConfig.load(config_path))
    session_id = engine.create_session()
    try:
        result = engine.handle_query(session_id, text)
    except TurnError as exc:
        raise click.ClickException(f"{exc} (trace {exc.trace_id})")
    click.echo(f"pathway:   {result.pathway.value} ({result.route_reason})")
    click.echo(f"rewritten: {result.rewritten_query}")
    click.echo(f"type:      {result.query_type}")
    if result.sql:
        click.echo(f"sql:       {result.sql}")
    if result.degraded:
        click.echo("degraded:  true")
    click.echo(f"sources:   {', '.join(result.sources) or '(none)'}")
    click.echo("")
    click.echo(result.answer_text)


@main.command("eval")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--tasks", "tasks_path", required=True, type=click.Path(exists=True))
@click.option("--format", "task_format", type=click.Choice(["mcq", "oe"]), default="mcq")
@click.option("--strategies", default="keyword,vector,hybrid", help="Comma-separated subset")
@click.option("--ir", "irs", default="100,150,200", help="Comma-separated pool sizes")
@click.option("--k", "ks", default="5,10,15", help="Comma-separated rerank depths")
@click.option("--model-label", default="configured-model")
@click.option("--out", "out_path", default=None, type=click.Path(), help="JSON report path")
def eval_command(
    config_path: str,
    tasks_path: str,
    task_format: str,
    strategies: str,
    irs: str,
    ks: str,
    model_label: str,
    out_path: str | None,
) -> None:
    """Sweep retrieval configurations over a task file and report results."""
    engine = build_engine(AppConfig.load(config_path), require_indices=True)
    if task_format == "mcq":
        items = load_mcq_items(tasks_path)
        judge = None
    else:
        items = load_oe_items(tasks_path)
        judge = ContainmentJudge()
    result = run_grid(
        items,
        engine.retriever,
        engine.generative_client,
        judge=judge,
        strategies=[RetrievalStrategy(s.strip()) for s in strategies.split(",") if s.strip()],
        irs=[int(x) for x in irs.split(",") if x.strip()],
        ks=[int(x) for x in ks.split(",") if x.strip()],
        model_label=model_label,
    )
    click.echo(result.summary_table())
    populated = 1 + sum(1 for c in result.cells.values() if c.metric is not None)
    failed = sum(1 for c in result.cells.values() if c.error)
    click.echo(f"\ncells: {populated} populated, {failed} failed")
    if out_path:
        Path(out_path).write_text(result.to_json(), encoding="utf-8")
        click.echo(f"report -> {out_path}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8080, type=int)
def serve(config_path: str, host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    engine = build_engine(AppConfig.load(config_path))
    uvicorn.run(create_app(engine), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
