"""Command-line surface for the dataset pipeline."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path
from typing import Optional

import click

from .config import STAGES, load_config
from .errors import ConfigError, EditForgeError
from .gateway import MockScript
from .manifest import dead_letter_list
from .mockserver import mock_serve
from .pipeline import (
    PipelineContext,
    StageReport,
    build_stats_document,
    render_stats_text,
    run_all,
    run_stage,
)
from .records import ScoreTriple
from .verification import consistency

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE_FAILURES = 3


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Run configuration JSON.")
@click.option("--offline", is_flag=True, default=False,
              help="Force mock-only mode; non-mock endpoints become a config error.")
@click.option("--seed", type=int, default=None, help="Override the run seed.")
@click.option("--workers", type=int, default=None, help="Override worker count.")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], offline: bool,
         seed: Optional[int], workers: Optional[int]):
    """editforge: source curation, multi-agent edit synthesis, judge filtering."""
    ctx.ensure_object(dict)
    ctx.obj.update({
        "config_path": config_path,
        "offline": offline or None,
        "seed": seed,
        "workers": workers,
    })


def _load_ctx(ctx: click.Context, extra_overrides: Optional[dict] = None) -> PipelineContext:
    config_path = ctx.obj.get("config_path")
    if config_path is None:
        raise ConfigError("no --config given")
    overrides = {
        "offline": ctx.obj.get("offline"),
        "seed": ctx.obj.get("seed"),
        "workers": ctx.obj.get("workers"),
    }
    overrides.update(extra_overrides or {})
    cfg = load_config(config_path, overrides=overrides)
    return PipelineContext(cfg)


def _echo_report(report: StageReport) -> None:
    click.echo(
        f"[{report.stage}] processed={report.processed} succeeded={report.succeeded} "
        f"failed={report.failed} skipped={report.skipped}"
    )


def _run_single_stage(ctx: click.Context, stage: str, retry_failed: bool,
                      extra_overrides: Optional[dict] = None) -> None:
    try:
        pctx = _load_ctx(ctx, extra_overrides)
        report = run_stage(pctx, stage, retry_failed=retry_failed)
        pctx.close()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _echo_report(report)
    sys.exit(EXIT_STAGE_FAILURES if report.failed > 0 else EXIT_OK)


@main.command()
@click.option("--src", "src_dir", type=click.Path(), default=None,
              help="Directory of seed images (overrides config source_dir).")
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def ingest(ctx: click.Context, src_dir: Optional[str], retry_failed: bool):
    """Curate seed images into the source pool."""
    overrides = {"source_dir": src_dir} if src_dir else {}
    _run_single_stage(ctx, "ingest", retry_failed, overrides)


@main.command()
@click.option("--variants", type=int, default=None,
              help="Synthesized variants per seed image (overrides config).")
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def expand(ctx: click.Context, variants: Optional[int], retry_failed: bool):
    """Grow the pool via retrieval and caption-guided synthesis."""
    overrides = {"variants": variants} if variants is not None else {}
    _run_single_stage(ctx, "expand", retry_failed, overrides)


@main.command()
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def route(ctx: click.Context, retry_failed: bool):
    """Assign each source its applicable editing tasks."""
    _run_single_stage(ctx, "route", retry_failed)


@main.command()
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def synthesize(ctx: click.Context, retry_failed: bool):
    """Generate instructions and edited images for routed stubs."""
    _run_single_stage(ctx, "synthesize", retry_failed)


@main.command()
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def verify(ctx: click.Context, retry_failed: bool):
    """Judge edited triplets on the three quality dimensions."""
    _run_single_stage(ctx, "verify", retry_failed)


@main.command("filter")
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def filter_cmd(ctx: click.Context, retry_failed: bool):
    """Partition scored triplets with the 3/2/2 keep rule."""
    _run_single_stage(ctx, "filter", retry_failed)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def stats(ctx: click.Context, fmt: str):
    """Compute and print the dataset statistics report."""
    try:
        pctx = _load_ctx(ctx)
        run_stage(pctx, "stats")
        doc = json.loads(pctx.paths.stats_json.read_text(encoding="utf-8"))
        pctx.close()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        click.echo(render_stats_text(doc))
    sys.exit(EXIT_OK)


@main.command("consistency")
@click.option("--candidate", required=True, type=click.Path(exists=True),
              help="scores.jsonl produced by the candidate judge.")
@click.option("--reference", required=True, type=click.Path(exists=True),
              help="scores.jsonl produced by the reference judge.")
@click.pass_context
def consistency_cmd(ctx: click.Context, candidate: str, reference: str):
    """Exact-agreement rate and MAE between two judges, aligned by triplet id."""
    try:
        cand = _load_scores(candidate)
        ref = _load_scores(reference)
        shared = sorted(set(cand) & set(ref))
        if not shared:
            raise ConfigError("score files share no triplet ids")
        if len(shared) != len(cand) or len(shared) != len(ref):
            missing = len(cand) + len(ref) - 2 * len(shared)
            click.echo(f"warning: {missing} unaligned entries ignored", err=True)
        report = consistency([cand[i] for i in shared], [ref[i] for i in shared])
    except (EditForgeError, OSError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(json.dumps(report.to_json(), indent=2))
    sys.exit(EXIT_OK)


# click registers the function under its given name; keep the spec's surface
main.commands["consistency"] = main.commands.pop("consistency-cmd")


def _load_scores(path: str) -> dict[str, ScoreTriple]:
    out: dict[str, ScoreTriple] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            out[obj["triplet_id"]] = ScoreTriple(int(obj["f"]), int(obj["c"]), int(obj["q"]))
    return out


@main.command("mock-serve")
@click.option("--script", "script_path", required=True, type=click.Path(exists=True))
@click.option("--port", type=int, default=8800)
@click.option("--host", default="127.0.0.1")
def mock_serve_cmd(script_path: str, port: int, host: str):
    """Serve a mock script over HTTP for real-endpoint configurations."""
    try:
        script = MockScript.load(script_path)
        handle = mock_serve(script, host=host, port=port)
    except EditForgeError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(f"mock server listening on {handle.base_url}")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        handle.shutdown()


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Run configuration JSON (overrides the global --config).")
@click.option("--retry-failed", is_flag=True, default=False)
@click.pass_context
def run(ctx: click.Context, config_path: Optional[str], retry_failed: bool):
    """Execute the full stage chain: ingest through stats."""
    if config_path:
        ctx.obj["config_path"] = config_path
    try:
        pctx = _load_ctx(ctx)
        report = run_all(pctx, retry_failed=retry_failed)
        pctx.close()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    for stage_report in report.stages:
        _echo_report(stage_report)
    click.echo(f"kept={report.kept} dropped={report.dropped}")
    sys.exit(EXIT_STAGE_FAILURES if report.had_failures else EXIT_OK)


@main.command("dead-letters")
@click.pass_context
def dead_letters(ctx: click.Context):
    """List terminally failed records grouped by stage and error class."""
    try:
        pctx = _load_ctx(ctx)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    grouped = dead_letter_list(pctx.ledger)
    pctx.close()
    doc = {
        stage: {klass: [e.record_id for e in entries] for klass, entries in by_class.items()}
        for stage, by_class in grouped.items()
    }
    click.echo(json.dumps(doc, indent=2))
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
