"""TF-IDF vectorization.

Two weighting variants: the additive form tf + ln(N/df) used throughout
the pipeline by default, and the conventional smoothed multiplicative
form tf * (ln((1+N)/(1+df)) + 1).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .textprep import TokenDoc

MODEL_FORMAT_VERSION = 1

Variant = Literal["paper_additive", "multiplicative"]


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray   # float64, finite
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values length mismatch")
        if len(self.indices) and (
            np.any(np.diff(self.indices) <= 0)
            or self.indices[0] < 0
            or self.indices[-1] >= self.dimension
        ):
            raise ValueError("indices must be strictly increasing within [0, dimension)")
        if len(self.values) and not np.all(np.isfinite(self.values)):
            raise ValueError("weights must be finite")

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        dense[self.indices] = self.values
        return dense

    def dot(self, other: "SparseVector") -> float:
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        i = j = 0
        total = 0.0
        a_idx, a_val = self.indices, self.values
        b_idx, b_val = other.indices, other.values
        while i < len(a_idx) and j < len(b_idx):
            if a_idx[i] == b_idx[j]:
                total += a_val[i] * b_val[j]
                i += 1
                j += 1
            elif a_idx[i] < b_idx[j]:
                i += 1
            else:
                j += 1
        return total

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


def zeros(dimension: int) -> SparseVector:
    return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), dimension)


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]
    df: dict[str, int]
    n_docs: int
    variant: Variant = "paper_additive"
    l2_normalize: bool = True

    def __post_init__(self):
        if self.n_docs < 1:
            raise ValueError("n_docs must be positive")
        indices = sorted(self.vocabulary.values())
        if indices != list(range(len(self.vocabulary))):
            raise ValueError("vocabulary indices must be a bijection onto 0..V-1")
        for token, count in self.df.items():
            if not (1 <= count <= self.n_docs):
                raise ValueError(f"df out of range for {token!r}")

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def idf(self, token: str) -> float:
        d = self.df[token]
        if self.variant == "paper_additive":
            return math.log(self.n_docs / d)
        return math.log((1 + self.n_docs) / (1 + d)) + 1.0

    def transform(self, doc: TokenDoc | Sequence[str]) -> SparseVector:
        tokens = doc.tokens if isinstance(doc, TokenDoc) else doc
        counts = Counter(t for t in tokens if t in self.vocabulary)
        if not counts:
            return zeros(self.dimension)
        items = sorted((self.vocabulary[t], t) for t in counts)
        indices = np.array([i for i, _ in items], dtype=np.int64)
        if self.variant == "paper_additive":
            weights = np.array([counts[t] + self.idf(t) for _, t in items])
        else:
            weights = np.array([counts[t] * self.idf(t) for _, t in items])
        if self.l2_normalize:
            norm = np.sqrt(np.dot(weights, weights))
            if norm > 0:
                weights = weights / norm
        return SparseVector(indices, weights, self.dimension)

    def transform_many(self, docs: Iterable[TokenDoc | Sequence[str]]) -> list[SparseVector]:
        return [self.transform(d) for d in docs]

    # -- persistence ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "tfidf",
            "variant": self.variant,
            "l2_normalize": self.l2_normalize,
            "n_docs": self.n_docs,
            "terms": {t: [self.vocabulary[t], self.df[t]] for t in self.vocabulary},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TfidfModel":
        if not isinstance(doc, dict) or doc.get("kind") != "tfidf":
            raise ValueError("not a tfidf model document")
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError("unsupported tfidf model format version")
        vocabulary = {t: idx for t, (idx, _) in doc["terms"].items()}
        df = {t: d for t, (_, d) in doc["terms"].items()}
        return cls(
            vocabulary=vocabulary,
            df=df,
            n_docs=doc["n_docs"],
            variant=doc["variant"],
            l2_normalize=doc["l2_normalize"],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TfidfModel":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ValueError(f"corrupt tfidf model file {path}: {exc}") from exc
        return cls.from_dict(doc)


def fit(
    corpus: Sequence[TokenDoc | Sequence[str]],
    variant: Variant = "paper_additive",
    l2_normalize: bool = True,
) -> TfidfModel:
    """Vocabulary over all distinct tokens (lexicographic column order),
    document frequencies, and corpus size."""
    if not corpus:
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    df: Counter[str] = Counter()
    for doc in corpus:
        tokens = doc.tokens if isinstance(doc, TokenDoc) else doc
        df.update(set(tokens))
    vocabulary = {token: i for i, token in enumerate(sorted(df))}
    return TfidfModel(
        vocabulary=vocabulary,
        df=dict(df),
        n_docs=len(corpus),
        variant=variant,
        l2_normalize=l2_normalize,
    )
