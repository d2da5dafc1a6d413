"""Labeled training data: Kaggle airline-sentiment CSV loading, the bundled
synthetic corpus, and stratified splitting."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

POSITIVE, NEGATIVE, NEUTRAL = "positive", "negative", "neutral"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledText:
    text: str
    label: int  # +1 positive, -1 negative


def load_sentiment_csv(path: str | Path, drop_neutral: bool = True) -> list[LabeledText]:
    """Reads rows with `airline_sentiment` and `text` columns (the Kaggle
    "Twitter US Airline Sentiment" layout).  Neutral rows are dropped:
    the classifier is binary."""
    path = Path(path)
    rows: list[LabeledText] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"airline_sentiment", "text"} <= set(reader.fieldnames):
            raise DatasetError(
                f"{path}: expected columns 'airline_sentiment' and 'text', "
                f"got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            sentiment = (row["airline_sentiment"] or "").strip().lower()
            text = row["text"] or ""
            if sentiment == NEUTRAL:
                if drop_neutral:
                    continue
                raise DatasetError(f"{path}:{lineno}: neutral rows not supported")
            if sentiment == POSITIVE:
                rows.append(LabeledText(text, +1))
            elif sentiment == NEGATIVE:
                rows.append(LabeledText(text, -1))
            else:
                raise DatasetError(f"{path}:{lineno}: unknown sentiment {sentiment!r}")
    if not rows:
        raise DatasetError(f"{path}: no usable rows")
    return rows


def stratified_split(
    rows: list[LabeledText], test_fraction: float = 0.2, seed: int = 7,
) -> tuple[list[LabeledText], list[LabeledText]]:
    """Deterministic stratified train/test split."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError("test_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train: list[LabeledText] = []
    test: list[LabeledText] = []
    for label in (+1, -1):
        idx = [i for i, r in enumerate(rows) if r.label == label]
        perm = rng.permutation(len(idx))
        n_test = int(round(len(idx) * test_fraction))
        chosen = set(idx[p] for p in perm[:n_test])
        for i in idx:
            (test if i in chosen else train).append(rows[i])
    return train, test


# -- synthetic corpus ----------------------------------------------------

_POSITIVE_WORDS = [
    "great", "awesome", "wonderful", "love", "excellent", "amazing",
    "friendly", "helpful", "smooth", "comfortable", "fantastic", "perfect",
    "thank", "appreciate", "enjoy", "pleasant", "kind", "quick", "easy",
    "happy",
]
_NEGATIVE_WORDS = [
    "terrible", "awful", "horrible", "worst", "hate", "rude", "delayed",
    "canceled", "lost", "broken", "dirty", "angry", "disappointed", "slow",
    "stranded", "refund", "complaint", "nightmare", "useless", "miserable",
]
_FILLER_WORDS = [
    "gate", "crew", "seat", "bag", "trip", "boarding", "pilot", "ticket",
    "window", "morning", "weekend", "staff", "luggage", "airport", "plane",
    "counter", "layover", "snack", "coffee", "wifi",
]


def make_synthetic_corpus(n_rows: int = 500, seed: int = 42) -> list[LabeledText]:
    """Balanced, separable-by-construction labeled tweets: each row carries
    2-4 words from exactly one sentiment pool plus neutral fillers."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n_rows):
        label = +1 if i % 2 == 0 else -1
        pool = _POSITIVE_WORDS if label > 0 else _NEGATIVE_WORDS
        n_sent = int(rng.integers(2, 5))
        n_fill = int(rng.integers(1, 4))
        words = [pool[int(j)] for j in rng.integers(0, len(pool), n_sent)]
        words += [_FILLER_WORDS[int(j)] for j in rng.integers(0, len(_FILLER_WORDS), n_fill)]
        perm = rng.permutation(len(words))
        rows.append(LabeledText(" ".join(words[p] for p in perm), label))
    return rows


def write_sentiment_csv(rows: list[LabeledText], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["airline_sentiment", "text"])
        for row in rows:
            writer.writerow([POSITIVE if row.label > 0 else NEGATIVE, row.text])
