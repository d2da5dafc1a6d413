"""Tweet record model and its line-delimited JSON wire form."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from .airlines import Airline

PROB_SUM_TOL = 1e-9


class RecordError(ValueError):
    """A raw record fails validation."""


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    text: str
    created_at: datetime
    author_id: str
    airline: Airline
    lang: str = "en"
    is_retweet: bool = False
    author_location: str | None = None
    p_positive: float | None = None
    p_negative: float | None = None

    def __post_init__(self):
        if not self.tweet_id:
            raise RecordError("tweet_id must be non-empty")
        if self.created_at.tzinfo is None:
            raise RecordError(f"tweet {self.tweet_id}: created_at must be timezone-aware")
        if (self.p_positive is None) != (self.p_negative is None):
            raise RecordError(f"tweet {self.tweet_id}: both probabilities must be set together")
        if self.p_positive is not None:
            if not (0.0 <= self.p_positive <= 1.0 and 0.0 <= self.p_negative <= 1.0):
                raise RecordError(f"tweet {self.tweet_id}: probabilities outside [0, 1]")
            if abs(self.p_positive + self.p_negative - 1.0) > PROB_SUM_TOL:
                raise RecordError(f"tweet {self.tweet_id}: probabilities do not sum to 1")
        # normalize to UTC so day bucketing is unambiguous
        object.__setattr__(self, "created_at", self.created_at.astimezone(timezone.utc))

    @property
    def is_scored(self) -> bool:
        return self.p_positive is not None

    def with_scores(self, p_positive: float, p_negative: float) -> "TweetRecord":
        return replace(self, p_positive=p_positive, p_negative=p_negative)

    def to_json(self) -> str:
        doc = {
            "tweet_id": self.tweet_id,
            "text": self.text,
            "created_at": self.created_at.isoformat().replace("+00:00", "Z"),
            "author_id": self.author_id,
            "author_location": self.author_location,
            "airline": self.airline.value,
            "lang": self.lang,
            "is_retweet": self.is_retweet,
        }
        if self.p_positive is not None:
            doc["p_positive"] = self.p_positive
            doc["p_negative"] = self.p_negative
        return json.dumps(doc, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, line: str, airline: Airline | None = None) -> "TweetRecord":
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise RecordError("record line is not an object")
        return cls.from_dict(doc, airline=airline)

    @classmethod
    def from_dict(cls, doc: dict, airline: Airline | None = None) -> "TweetRecord":
        try:
            created = _parse_timestamp(doc["created_at"])
            raw_airline = doc.get("airline")
            if airline is None:
                if raw_airline is None:
                    raise RecordError("record carries no airline tag")
                airline = Airline.from_string(raw_airline)
            return cls(
                tweet_id=str(doc["tweet_id"]),
                text=doc["text"],
                created_at=created,
                author_id=str(doc.get("author_id", "")),
                author_location=doc.get("author_location"),
                airline=airline,
                lang=doc.get("lang", "en"),
                is_retweet=bool(doc.get("is_retweet", False)),
                p_positive=doc.get("p_positive"),
                p_negative=doc.get("p_negative"),
            )
        except KeyError as exc:
            raise RecordError(f"missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, RecordError):
                raise
            raise RecordError(str(exc)) from exc


def _parse_timestamp(raw) -> datetime:
    if not isinstance(raw, str):
        raise RecordError(f"created_at must be a string, got {type(raw).__name__}")
    value = raw.replace("Z", "+00:00")
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)
