"""POS-blind lemmatizer: irregular-form dictionary, then noun and verb
suffix rules validated against a bundled lemma lexicon.

Unknown tokens pass through unchanged, so rare handles and coined words
survive downstream frequency analysis intact.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from importlib import resources
from pathlib import Path

_NOUN_RULES = [
    ("s", ""),
    ("ses", "s"),
    ("ves", "f"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
]

_VERB_RULES = [
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
]

_CONSONANTS = set("bcdfghjklmnpqrstvwxz")


def _data_text(name: str) -> str:
    return resources.files("airsent.data").joinpath(name).read_text(encoding="utf-8")


def data_checksum(name: str) -> str:
    """SHA-256 of a bundled data file, for list-version pinning."""
    raw = resources.files("airsent.data").joinpath(name).read_bytes()
    return hashlib.sha256(raw).hexdigest()


@lru_cache(maxsize=1)
def _exceptions() -> dict[str, str]:
    table = {}
    for line in _data_text("lemma_exceptions.txt").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        form, lemma = line.split()
        table[form] = lemma
    return table


@lru_cache(maxsize=1)
def _lexicon() -> frozenset[str]:
    words = set()
    for line in _data_text("lemma_lexicon.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def _candidates(token: str, rules: list[tuple[str, str]]) -> list[str]:
    out = []
    for suffix, replacement in rules:
        if token.endswith(suffix) and len(token) > len(suffix):
            candidate = token[: len(token) - len(suffix)] + replacement
            out.append(candidate)
            # undo consonant doubling: "stopped" -> "stopp" -> "stop"
            if (
                not replacement
                and len(candidate) >= 3
                and candidate[-1] == candidate[-2]
                and candidate[-1] in _CONSONANTS
            ):
                out.append(candidate[:-1])
    return out


def lemmatize(token: str) -> str:
    if not token.isalpha() or not token.islower():
        raise ValueError(f"lemmatize expects a lowercase alphabetic token, got {token!r}")
    exceptions = _exceptions()
    if token in exceptions:
        return exceptions[token]
    lexicon = _lexicon()
    if token in lexicon:
        return token
    for rules in (_NOUN_RULES, _VERB_RULES):
        for candidate in _candidates(token, rules):
            if candidate in lexicon:
                # e.g. "peoples" -> "people" -> "person"
                return exceptions.get(candidate, candidate)
    return token


def lexicon_words() -> frozenset[str]:
    return _lexicon()


def exception_table() -> dict[str, str]:
    return dict(_exceptions())
