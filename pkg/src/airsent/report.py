"""Batch analytics for one airline and date range: series with bands,
breakout list, per-breakout word tables, CSV exports, and figures."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .airlines import Airline
from .records import TweetRecord
from .series import (BandSeries, Breakout, SentimentSeries, aggregate_daily,
                     bollinger, detect_breakouts, to_csv, znormalize)
from .textprep import NormalizationConfig, normalize_doc
from .wordfreq import FrequencyTable, count_tokens, top_k

BREAKOUTS_CSV_COLUMNS = ["date", "direction", "z", "band", "gap"]
TOP_WORDS = 5


@dataclass(frozen=True)
class BreakoutAttribution:
    start: date
    end: date
    table: FrequencyTable


@dataclass
class Analytics:
    airline: Airline
    series: SentimentSeries
    bands: BandSeries
    breakouts: list[Breakout]
    attributions: list[BreakoutAttribution]


def group_breakout_runs(breakouts: Sequence[Breakout]) -> list[tuple[date, date]]:
    """Union of consecutive breakout days into [start, end] runs."""
    runs: list[tuple[date, date]] = []
    for b in sorted(breakouts, key=lambda b: b.date):
        if runs and b.date == runs[-1][1] + timedelta(days=1):
            runs[-1] = (runs[-1][0], b.date)
        else:
            runs.append((b.date, b.date))
    return runs


def compute_analytics(
    records: Sequence[TweetRecord],
    airline: Airline,
    start: date,
    end: date,
    window: int,
    multiplier: float,
    normalization: NormalizationConfig,
    attribution_padding_days: int = 0,
) -> Analytics:
    points = aggregate_daily(records, start, end)
    series = znormalize(points, airline=airline)
    bands = bollinger(series, window=window, multiplier=multiplier)
    breakouts = detect_breakouts(series, bands)
    by_day: dict[date, list[TweetRecord]] = {}
    for record in records:
        by_day.setdefault(record.created_at.date(), []).append(record)
    attributions = []
    for run_start, run_end in group_breakout_runs(breakouts):
        pad = timedelta(days=attribution_padding_days)
        window_records = []
        day = run_start - pad
        while day <= run_end + pad:
            window_records.extend(by_day.get(day, []))
            day += timedelta(days=1)
        docs = [normalize_doc(r, normalization) for r in window_records]
        table = count_tokens(docs)
        attributions.append(BreakoutAttribution(
            start=run_start, end=run_end,
            table=top_k(table, TOP_WORDS) if len(table) else table,
        ))
    return Analytics(
        airline=airline, series=series, bands=bands,
        breakouts=breakouts, attributions=attributions,
    )


def breakouts_csv(breakouts: Sequence[Breakout]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BREAKOUTS_CSV_COLUMNS)
    for b in breakouts:
        writer.writerow([b.date.isoformat(), b.direction, repr(b.z_value),
                         repr(b.band_value), repr(b.gap)])
    return buf.getvalue()


def _plot_series(analytics: Analytics, path: Path) -> None:
    series, bands = analytics.series, analytics.bands
    x = np.arange(len(series))
    fig, ax = plt.subplots(figsize=(11, 5))
    ax.plot(x, series.z_scores, color="0.4", linewidth=0.9, label="daily sentiment (z)")
    ax.plot(x, bands.sma, color="tab:blue", linewidth=1.4,
            label=f"{bands.window}-day SMA")
    ax.plot(x, bands.upper, color="tab:orange", linewidth=1.0,
            label=f"bands (±{bands.multiplier:g} std)")
    ax.plot(x, bands.lower, color="tab:orange", linewidth=1.0)
    ax.fill_between(x, bands.lower, bands.upper, color="tab:orange", alpha=0.12)
    if analytics.breakouts:
        date_to_i = {d: i for i, d in enumerate(series.dates)}
        bx = [date_to_i[b.date] for b in analytics.breakouts]
        by = [b.z_value for b in analytics.breakouts]
        ax.scatter(bx, by, color="tab:red", zorder=5, s=28, label="breakout")
    ticks = np.linspace(0, len(series) - 1, min(8, len(series))).astype(int)
    ax.set_xticks(ticks)
    ax.set_xticklabels([series.dates[i].isoformat() for i in ticks], rotation=30, ha="right")
    ax.set_ylabel("Z-normalized daily sentiment")
    ax.set_title(f"{analytics.airline.value}: sentiment with Bollinger Bands")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _plot_counts(analytics: Analytics, path: Path) -> None:
    series = analytics.series
    x = np.arange(len(series))
    pos = [p.n_positive for p in series.points]
    neg = [p.n_negative for p in series.points]
    fig, ax = plt.subplots(figsize=(11, 4))
    ax.plot(x, pos, color="tab:green", linewidth=1.1, label="positive tweets")
    ax.plot(x, neg, color="tab:red", linewidth=1.1, label="negative tweets")
    ticks = np.linspace(0, len(series) - 1, min(8, len(series))).astype(int)
    ax.set_xticks(ticks)
    ax.set_xticklabels([series.dates[i].isoformat() for i in ticks], rotation=30, ha="right")
    ax.set_ylabel("tweets per day")
    ax.set_title(f"{analytics.airline.value}: daily positive/negative counts")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_report(analytics: Analytics, outdir: str | Path, figures: bool = True) -> list[Path]:
    """Writes series.csv, breakouts.csv, one word table per breakout run,
    and (optionally) the two figures.  Deterministic file contents."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = analytics.airline.value
    written = []

    series_path = outdir / f"{prefix}_series.csv"
    series_path.write_text(to_csv(analytics.series, analytics.bands), encoding="utf-8")
    written.append(series_path)

    breakouts_path = outdir / f"{prefix}_breakouts.csv"
    breakouts_path.write_text(breakouts_csv(analytics.breakouts), encoding="utf-8")
    written.append(breakouts_path)

    for attribution in analytics.attributions:
        words_path = outdir / f"{prefix}_breakout_words_{attribution.start.isoformat()}.csv"
        words_path.write_text(attribution.table.to_csv(), encoding="utf-8")
        written.append(words_path)

    if figures:
        series_fig = outdir / f"{prefix}_series.png"
        _plot_series(analytics, series_fig)
        written.append(series_fig)
        counts_fig = outdir / f"{prefix}_counts.png"
        _plot_counts(analytics, counts_fig)
        written.append(counts_fig)
    return written
