"""Pipeline configuration: data directory, per-airline queries, model and
series parameters.  JSON file with CLI flag overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .airlines import Airline, default_queries
from .query import Query, parse_query
from .series import DEFAULT_MULTIPLIER, DEFAULT_WINDOW
from .textprep import NormalizationConfig


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    data_dir: Path = Path("data")
    queries: dict[Airline, str] = field(default_factory=lambda: {
        a: q for a, q in default_queries().items()
    })
    normalizer: str = "lemma"
    tfidf_variant: str = "multiplicative"
    svm_c: float = 1.0
    svm_gamma: float | None = None
    svm_tol: float = 1e-3
    seed: int = 7
    window: int = DEFAULT_WINDOW
    multiplier: float = DEFAULT_MULTIPLIER
    bind_host: str = "127.0.0.1"
    bind_port: int = 8000

    def __post_init__(self):
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.multiplier <= 0:
            raise ConfigError("multiplier must be positive")
        if self.svm_c <= 0 or self.svm_tol <= 0:
            raise ConfigError("svm_c and svm_tol must be positive")
        if self.normalizer not in ("stem", "lemma"):
            raise ConfigError(f"unknown normalizer {self.normalizer!r}")
        if self.tfidf_variant not in ("paper_additive", "multiplicative"):
            raise ConfigError(f"unknown tfidf variant {self.tfidf_variant!r}")

    def parsed_query(self, airline: Airline) -> Query:
        return parse_query(self.queries[airline])

    def normalization(self) -> NormalizationConfig:
        return NormalizationConfig(normalizer=self.normalizer)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid config {path}: {exc}") from exc
        kwargs = {}
        if "data_dir" in doc:
            kwargs["data_dir"] = (path.parent / doc["data_dir"]).resolve()
        if "queries" in doc:
            kwargs["queries"] = {
                Airline.from_string(name): q for name, q in doc["queries"].items()
            }
        for key in ("normalizer", "tfidf_variant", "svm_c", "svm_gamma", "svm_tol",
                    "seed", "window", "multiplier", "bind_host", "bind_port"):
            if key in doc:
                kwargs[key] = doc[key]
        config = cls(**kwargs)
        for airline, q in config.queries.items():
            try:
                parse_query(q)
            except ValueError as exc:
                raise ConfigError(f"bad query for {airline.value}: {exc}") from exc
        return config

    def save(self, path: str | Path) -> None:
        doc = {
            "data_dir": str(self.data_dir),
            "queries": {a.value: q for a, q in self.queries.items()},
            "normalizer": self.normalizer,
            "tfidf_variant": self.tfidf_variant,
            "svm_c": self.svm_c,
            "svm_gamma": self.svm_gamma,
            "svm_tol": self.svm_tol,
            "seed": self.seed,
            "window": self.window,
            "multiplier": self.multiplier,
            "bind_host": self.bind_host,
            "bind_port": self.bind_port,
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
