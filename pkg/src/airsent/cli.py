"""Command-line entry points: ingest, train, score, report, serve."""

from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import click

from .airlines import Airline
from .config import ConfigError, PipelineConfig
from .dataset import DatasetError, load_sentiment_csv
from .pipeline import SentimentPipeline, TrainOptions, train as train_pipeline
from .report import compute_analytics, write_report
from .store import StoreError, TweetStore

EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        return PipelineConfig.load(path)
    except ConfigError as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_USAGE))


def _fail(message: str, code: int) -> int:
    click.echo(f"error: {message}", err=True)
    return code


def _parse_airline(value: str) -> Airline:
    try:
        return Airline.from_string(value)
    except ValueError as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_USAGE))


def _parse_date(value: str, flag: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise click.exceptions.Exit(_fail(f"{flag} must be YYYY-MM-DD, got {value!r}", EXIT_USAGE))


@click.group()
def main():
    """Airline tweet sentiment monitoring pipeline."""


@main.command()
@click.option("--config", "config_path", type=str, default=None, help="Config JSON file.")
@click.option("--airline", required=True, help="Airline partition to ingest into.")
@click.argument("input_path", type=str)
def ingest(config_path, airline, input_path):
    """Ingest a JSONL file of raw tweet records for one airline."""
    config = _load_config(config_path)
    carrier = _parse_airline(airline)
    path = Path(input_path)
    if not path.exists():
        raise click.exceptions.Exit(_fail(f"input file not found: {path}", EXIT_USAGE))
    store = TweetStore(config.data_dir)
    query = config.parsed_query(carrier)
    try:
        with path.open(encoding="utf-8") as fh:
            report = store.ingest(fh, carrier, query)
    except (StoreError, OSError) as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_RUNTIME))
    click.echo(f"accepted={report.accepted} duplicates={report.duplicates} "
               f"rejected={report.rejected}")
    for reason in report.reasons:
        click.echo(f"  rejected: {reason}", err=True)


@main.command()
@click.option("--config", "config_path", type=str, default=None)
@click.option("--model", "model_path", required=True, type=str, help="Output model file.")
@click.option("--seed", type=int, default=None, help="Split/CV seed (overrides config).")
@click.argument("dataset_path", type=str)
def train(config_path, model_path, seed, dataset_path):
    """Train TF-IDF + SVM + Platt scaling on a labeled sentiment CSV."""
    config = _load_config(config_path)
    try:
        rows = load_sentiment_csv(dataset_path)
    except (DatasetError, FileNotFoundError) as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_USAGE))
    options = TrainOptions(
        C=config.svm_c,
        gamma=config.svm_gamma,
        tol=config.svm_tol,
        seed=config.seed if seed is None else seed,
        tfidf_variant=config.tfidf_variant,
    )
    result = train_pipeline(rows, normalization=config.normalization(), options=options)
    result.pipeline.save(model_path)
    m = result.test_metrics
    click.echo(f"rows={len(rows)} train={result.n_train} test={result.n_test}")
    click.echo(f"accuracy={m.accuracy:.4f} precision={m.precision:.4f} "
               f"recall={m.recall:.4f} f1={m.f1:.4f}")
    click.echo(f"confusion matrix [tn fp; fn tp] = [{m.tn} {m.fp}; {m.fn} {m.tp}]")
    f = result.full_metrics
    click.echo(f"full-dataset accuracy={f.accuracy:.4f} "
               f"confusion [tn fp; fn tp] = [{f.tn} {f.fp}; {f.fn} {f.tp}]")
    click.echo(f"model written to {model_path}")


@main.command()
@click.option("--config", "config_path", type=str, default=None)
@click.option("--model", "model_path", required=True, type=str)
@click.option("--airline", required=True)
@click.option("--from", "date_from", required=True, help="Start date (YYYY-MM-DD).")
@click.option("--to", "date_to", required=True, help="End date (YYYY-MM-DD).")
def score(config_path, model_path, airline, date_from, date_to):
    """Fill sentiment probabilities for unscored stored tweets in a range."""
    config = _load_config(config_path)
    carrier = _parse_airline(airline)
    start = _parse_date(date_from, "--from")
    end = _parse_date(date_to, "--to")
    if start > end:
        raise click.exceptions.Exit(_fail("--from must not exceed --to", EXIT_USAGE))
    try:
        pipeline = SentimentPipeline.load(model_path)
    except (ValueError, FileNotFoundError) as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_USAGE))
    store = TweetStore(config.data_dir)
    scored = 0
    records = store.load_range(carrier, start, end)
    by_day: dict[date, list] = {}
    for record in records:
        by_day.setdefault(record.created_at.date(), []).append(record)
    for day, day_records in by_day.items():
        pending = [r for r in day_records if not r.is_scored]
        if not pending:
            continue
        scores = pipeline.score_texts([r.text for r in pending])
        updated = {r.tweet_id: r.with_scores(s.p_positive, s.p_negative)
                   for r, s in zip(pending, scores)}
        new_day = [updated.get(r.tweet_id, r) for r in day_records]
        store.rewrite_day(carrier, day, new_day)
        scored += len(pending)
    click.echo(f"scored={scored}")


@main.command()
@click.option("--config", "config_path", type=str, default=None)
@click.option("--airline", required=True)
@click.option("--from", "date_from", required=True)
@click.option("--to", "date_to", required=True)
@click.option("--window", type=int, default=None, help="SMA window (days).")
@click.option("--k", "multiplier", type=float, default=None, help="Band width multiplier.")
@click.option("--out", "out_dir", type=str, default="report", help="Output directory.")
@click.option("--figures/--no-figures", default=True)
def report(config_path, airline, date_from, date_to, window, multiplier, out_dir, figures):
    """Write series CSV, breakout list, word tables, and figures."""
    config = _load_config(config_path)
    carrier = _parse_airline(airline)
    start = _parse_date(date_from, "--from")
    end = _parse_date(date_to, "--to")
    if start > end:
        raise click.exceptions.Exit(_fail("empty range: --from exceeds --to", EXIT_USAGE))
    store = TweetStore(config.data_dir)
    records = store.load_range(carrier, start, end)
    if not records:
        raise click.exceptions.Exit(_fail(
            f"no stored records for {carrier.value} in {start}..{end}", EXIT_USAGE))
    try:
        analytics = compute_analytics(
            records, carrier, start, end,
            window=window if window is not None else config.window,
            multiplier=multiplier if multiplier is not None else config.multiplier,
            normalization=config.normalization(),
        )
    except ValueError as exc:
        raise click.exceptions.Exit(_fail(str(exc), EXIT_USAGE))
    written = write_report(analytics, out_dir, figures=figures)
    click.echo(f"breakouts={len(analytics.breakouts)}")
    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--config", "config_path", type=str, default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static-dir", "static_dir", type=str, default=None,
              help="Directory of static dashboard assets to serve at /.")
def serve(config_path, host, port, static_dir):
    """Run the read-only analytics HTTP API."""
    import uvicorn

    from .service import create_app

    config = _load_config(config_path)
    app = create_app(config, static_dir=static_dir)
    uvicorn.run(app,
                host=host if host is not None else config.bind_host,
                port=port if port is not None else config.bind_port)


if __name__ == "__main__":
    sys.exit(main())
