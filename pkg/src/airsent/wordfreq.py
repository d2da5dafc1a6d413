"""Word-frequency tables over normalized tokens, and keyword search."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from datetime import date
from typing import Sequence

from .airlines import Airline
from .records import TweetRecord
from .textprep import NormalizationConfig, TokenDoc, clean, lemmatize, normalize_doc, stem


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple[tuple[str, int], ...]  # descending count, ties lexicographic

    def __post_init__(self):
        counts = [c for _, c in self.entries]
        if any(c <= 0 for c in counts):
            raise ValueError("counts must be positive")
        if any(a < b for a, b in zip(counts, counts[1:])):
            raise ValueError("counts must be non-increasing")
        tokens = [t for t, _ in self.entries]
        if len(set(tokens)) != len(tokens):
            raise ValueError("duplicate tokens")

    def __len__(self) -> int:
        return len(self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["word", "frequency"])
        writer.writerows(self.entries)
        return buf.getvalue()


def count_tokens(docs: Sequence[TokenDoc]) -> FrequencyTable:
    """Every token occurrence counts (duplicates within a doc included)."""
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(doc.tokens)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyTable(tuple(ordered))


def top_k(table: FrequencyTable, k: int) -> FrequencyTable:
    if k < 1:
        raise ValueError("k must be >= 1")
    return FrequencyTable(table.entries[:k])


def normalize_keyword(keyword: str, config: NormalizationConfig) -> str:
    cleaned = clean(keyword)
    if not cleaned:
        return ""
    token = cleaned.split()[0]
    return stem(token) if config.normalizer == "stem" else lemmatize(token)


def keyword_search(
    records: Sequence[TweetRecord],
    keyword: str,
    config: NormalizationConfig,
    start: date | None = None,
    end: date | None = None,
) -> list[TweetRecord]:
    """Records whose normalized tokens contain the normalized keyword,
    sorted by created_at (ties by tweet_id)."""
    if not keyword or not keyword.strip():
        raise ValueError("keyword must be non-empty")
    needle = normalize_keyword(keyword, config)
    if not needle:
        return []
    hits = []
    for record in records:
        day = record.created_at.date()
        if start is not None and day < start:
            continue
        if end is not None and day > end:
            continue
        if needle in normalize_doc(record, config).tokens:
            hits.append(record)
    hits.sort(key=lambda r: (r.created_at, r.tweet_id))
    return hits
