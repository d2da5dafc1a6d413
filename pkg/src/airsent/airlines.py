"""The ten tracked U.S. carriers, their handles, and default search queries."""

from __future__ import annotations

import enum


class Airline(enum.Enum):
    AMERICAN = "american"
    UNITED = "united"
    SOUTHWEST = "southwest"
    DELTA = "delta"
    JETBLUE = "jetblue"
    ALASKA = "alaska"
    ALLEGIANT = "allegiant"
    FRONTIER = "frontier"
    HAWAIIAN = "hawaiian"
    SPIRIT = "spirit"

    @classmethod
    def from_string(cls, value: str) -> "Airline":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown airline: {value!r}") from None


# Official account handle per carrier, lowercase, no '@'.
HANDLES: dict[Airline, str] = {
    Airline.AMERICAN: "americanair",
    Airline.UNITED: "united",
    Airline.SOUTHWEST: "southwestair",
    Airline.DELTA: "delta",
    Airline.JETBLUE: "jetblue",
    Airline.ALASKA: "alaskaair",
    Airline.ALLEGIANT: "allegiant",
    Airline.FRONTIER: "flyfrontier",
    Airline.HAWAIIAN: "hawaiianair",
    Airline.SPIRIT: "spiritairlines",
}

_NAME_WORDS: dict[Airline, list[str]] = {
    Airline.AMERICAN: ["american"],
    Airline.UNITED: ["united"],
    Airline.SOUTHWEST: ["southwest"],
    Airline.DELTA: ["delta"],
    Airline.JETBLUE: ["jetblue"],
    Airline.ALASKA: ["alaska"],
    Airline.ALLEGIANT: ["allegiant"],
    Airline.FRONTIER: ["frontier"],
    Airline.HAWAIIAN: ["hawaiian"],
    Airline.SPIRIT: ["spirit"],
}


def default_query_string(airline: Airline) -> str:
    """Search query for one carrier: handle mention or name phrase,
    English only, retweets excluded.

    The name/mention alternation is parenthesized so the lang and
    retweet filters apply to the whole query.
    """
    name = " ".join(_NAME_WORDS[airline])
    return f"(@{HANDLES[airline]} OR {name} airlines) lang:en -is:retweet"


def default_queries() -> dict[Airline, str]:
    return {a: default_query_string(a) for a in Airline}


def keyword_set(airline: Airline) -> frozenset[str]:
    """Tokens stripped from a carrier's tweets before modeling: name words,
    the official handle, possessives (cleaned form), and generic carrier words.
    """
    words = set(_NAME_WORDS[airline])
    words.add(HANDLES[airline])
    words.update(w + "s" for w in _NAME_WORDS[airline])  # "united's" cleans to "uniteds"
    words.update({"airline", "airlines", "air"})
    return frozenset(words)


def default_keywords() -> dict[Airline, frozenset[str]]:
    return {a: keyword_set(a) for a in Airline}
