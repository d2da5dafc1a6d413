"""Daily sentiment aggregation, Z-normalization, simple moving averages,
Bollinger Bands, and breakout detection."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Literal, Sequence

import numpy as np

from .airlines import Airline
from .records import TweetRecord

DEFAULT_WINDOW = 14
DEFAULT_MULTIPLIER = 2.0

SERIES_CSV_COLUMNS = [
    "date", "n_tweets", "n_positive", "n_negative", "raw_score",
    "z", "sma", "upper", "lower", "breakout_direction",
]


@dataclass(frozen=True)
class DailyPoint:
    date: date
    n_tweets: int
    n_positive: int
    n_negative: int
    raw_score: float

    def __post_init__(self):
        if self.n_positive + self.n_negative != self.n_tweets:
            raise ValueError("positive + negative counts must equal n_tweets")
        if abs(self.raw_score) > self.n_tweets + 1e-9:
            raise ValueError("|raw_score| cannot exceed tweet count")


@dataclass(frozen=True)
class SentimentSeries:
    airline: Airline
    dates: tuple[date, ...]
    points: tuple[DailyPoint, ...]
    z_scores: np.ndarray
    mean: float
    std: float

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class BandSeries:
    window: int
    multiplier: float
    sma: np.ndarray    # NaN where undefined (first window-1 dates)
    upper: np.ndarray
    lower: np.ndarray


@dataclass(frozen=True)
class Breakout:
    date: date
    direction: Literal["below_lower", "above_upper"]
    z_value: float
    band_value: float

    @property
    def gap(self) -> float:
        return abs(self.z_value - self.band_value)


def aggregate_daily(
    records: Sequence[TweetRecord],
    start: date,
    end: date,
    score_mode: Literal["sum", "mean"] = "sum",
) -> list[DailyPoint]:
    """One point per date in [start, end]; missing days get zero counts.

    The daily score is the sum of per-tweet (p_pos - p_neg); tweets with
    p_pos <= 0.5 count as negative.
    """
    if start > end:
        raise ValueError(f"empty range: {start} > {end}")
    buckets: dict[date, list[TweetRecord]] = {}
    for record in records:
        if not record.is_scored:
            raise ValueError(f"tweet {record.tweet_id} has no sentiment scores")
        day = record.created_at.date()
        if start <= day <= end:
            buckets.setdefault(day, []).append(record)
    points = []
    day = start
    while day <= end:
        todays = buckets.get(day, [])
        n_pos = sum(1 for r in todays if r.p_positive > 0.5)
        score = math.fsum(r.p_positive - r.p_negative for r in todays)
        if score_mode == "mean" and todays:
            score /= len(todays)
        points.append(DailyPoint(
            date=day,
            n_tweets=len(todays),
            n_positive=n_pos,
            n_negative=len(todays) - n_pos,
            raw_score=score,
        ))
        day += timedelta(days=1)
    return points


def znormalize(points: Sequence[DailyPoint], airline: Airline = Airline.AMERICAN) -> SentimentSeries:
    """z_d = (raw_d - mean) / population std over the whole series."""
    if len(points) < 2:
        raise ValueError("need at least 2 points to Z-normalize")
    dates = tuple(p.date for p in points)
    for prev, cur in zip(dates, dates[1:]):
        if cur != prev + timedelta(days=1):
            raise ValueError(f"dates must be dense and increasing; gap at {cur}")
    raw = np.array([p.raw_score for p in points])
    mean = float(np.mean(raw))
    std = float(np.std(raw))  # population std
    if std == 0.0:
        raise ValueError("constant series has zero variance; cannot Z-normalize")
    return SentimentSeries(
        airline=airline,
        dates=dates,
        points=tuple(points),
        z_scores=(raw - mean) / std,
        mean=mean,
        std=std,
    )


def _rolling_mean_std(values: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Trailing-window mean and population std; NaN before the window fills.
    Recomputed per window (O(n*w)) so no rolling-sum drift can accumulate."""
    n = len(values)
    mean = np.full(n, np.nan)
    std = np.full(n, np.nan)
    for i in range(window - 1, n):
        chunk = values[i - window + 1: i + 1]
        mean[i] = np.mean(chunk)
        std[i] = np.std(chunk)
    return mean, std


def sma(series: SentimentSeries, window: int) -> np.ndarray:
    if not (1 <= window <= len(series)):
        raise ValueError(f"window must be in 1..{len(series)}, got {window}")
    mean, _ = _rolling_mean_std(series.z_scores, window)
    return mean


def bollinger(series: SentimentSeries, window: int = DEFAULT_WINDOW,
              multiplier: float = DEFAULT_MULTIPLIER,
              std_of_sma: bool = False) -> BandSeries:
    """Bands at sma +/- multiplier * rolling population std of z.

    std_of_sma=True instead spreads the bands by the rolling std of the
    SMA line itself (a much narrower envelope, kept for comparison).
    """
    if not (1 <= window <= len(series)):
        raise ValueError(f"window must be in 1..{len(series)}, got {window}")
    if multiplier <= 0:
        raise ValueError("multiplier must be positive")
    mean, std = _rolling_mean_std(series.z_scores, window)
    if std_of_sma:
        _, std = _rolling_mean_std(mean, window)
    return BandSeries(
        window=window,
        multiplier=multiplier,
        sma=mean,
        upper=mean + multiplier * std,
        lower=mean - multiplier * std,
    )


def detect_breakouts(series: SentimentSeries, bands: BandSeries) -> list[Breakout]:
    """Dates where z strictly exits the band; boundary contact is not a
    breakout."""
    out = []
    for i, day in enumerate(series.dates):
        if np.isnan(bands.sma[i]):
            continue
        z = float(series.z_scores[i])
        if z < bands.lower[i]:
            out.append(Breakout(day, "below_lower", z, float(bands.lower[i])))
        elif z > bands.upper[i]:
            out.append(Breakout(day, "above_upper", z, float(bands.upper[i])))
    return out


def to_csv(series: SentimentSeries, bands: BandSeries) -> str:
    """Fixed-layout CSV export (column order is part of the contract)."""
    breakout_by_date = {b.date: b.direction for b in detect_breakouts(series, bands)}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_CSV_COLUMNS)
    for i, point in enumerate(series.points):
        writer.writerow([
            point.date.isoformat(),
            point.n_tweets,
            point.n_positive,
            point.n_negative,
            repr(point.raw_score),
            repr(float(series.z_scores[i])),
            "" if np.isnan(bands.sma[i]) else repr(float(bands.sma[i])),
            "" if np.isnan(bands.upper[i]) else repr(float(bands.upper[i])),
            "" if np.isnan(bands.lower[i]) else repr(float(bands.lower[i])),
            breakout_by_date.get(point.date, ""),
        ])
    return buf.getvalue()
