"""Tweet text normalization: cleaning, tokenization, stop-word and
airline-keyword removal, stemming/lemmatization."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from . import lemmatize as _lemma
from . import porter
from .airlines import Airline, default_keywords
from .records import TweetRecord

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_APOSTROPHE_RE = re.compile(r"['’]")
_NON_ALPHA_RE = re.compile(r"[^a-z]+")

STOPWORDS_FILE = "stopwords.txt"


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = _lemma._data_text(STOPWORDS_FILE)
    return frozenset(
        line.strip() for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


@dataclass(frozen=True)
class TokenDoc:
    tweet_id: str
    tokens: tuple[str, ...]

    @property
    def is_empty(self) -> bool:
        return not self.tokens


@dataclass(frozen=True)
class NormalizationConfig:
    stopword_list_version: str = "v1"
    airline_keywords: dict[Airline, frozenset[str]] = field(default_factory=default_keywords)
    normalizer: Literal["stem", "lemma"] = "lemma"

    def __post_init__(self):
        for airline, words in self.airline_keywords.items():
            if not words:
                raise ValueError(f"empty keyword set for {airline.value}")


def clean(text: str) -> str:
    """Lowercase letters and single spaces only.  URLs go first so their
    fragments never become tokens; '@'/'#' sigils are dropped but the
    handle/tag text is kept; apostrophes are deleted so contractions and
    possessives stay single tokens."""
    out = _URL_RE.sub(" ", text)
    out = out.lower()
    out = _APOSTROPHE_RE.sub("", out)
    out = _NON_ALPHA_RE.sub(" ", out)
    return " ".join(out.split())


def tokenize(cleaned: str) -> list[str]:
    return cleaned.split()


def remove_noise(tokens: list[str], airline: Airline, config: NormalizationConfig) -> list[str]:
    stop = stopwords()
    keywords = config.airline_keywords.get(airline, frozenset())
    return [t for t in tokens if t not in stop and t not in keywords]


def stem(token: str) -> str:
    return porter.stem(token)


def lemmatize(token: str) -> str:
    return _lemma.lemmatize(token)


def normalize_doc(record: TweetRecord, config: NormalizationConfig) -> TokenDoc:
    tokens = remove_noise(tokenize(clean(record.text)), record.airline, config)
    mapper = stem if config.normalizer == "stem" else lemmatize
    return TokenDoc(tweet_id=record.tweet_id, tokens=tuple(mapper(t) for t in tokens))


def normalize_text(text: str, airline: Airline, config: NormalizationConfig) -> tuple[str, ...]:
    """Same pipeline for text that is not a stored record (training rows,
    search keywords)."""
    tokens = remove_noise(tokenize(clean(text)), airline, config)
    mapper = stem if config.normalizer == "stem" else lemmatize
    return tuple(mapper(t) for t in tokens)
