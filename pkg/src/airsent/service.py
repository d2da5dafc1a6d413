"""Read-only analytics HTTP API over the tweet store.

All requests are served from an immutable in-memory snapshot; refreshing
swaps the whole snapshot atomically.
"""

from __future__ import annotations

import math
from contextlib import asynccontextmanager
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query as QueryParam
from fastapi.middleware.cors import CORSMiddleware

from .airlines import Airline
from .config import PipelineConfig
from .records import TweetRecord
from .report import compute_analytics
from .store import TweetStore
from .wordfreq import keyword_search

SCHEMA_VERSION = 1
DEFAULT_PAGE_SIZE = 50


@dataclass(frozen=True)
class ApiSnapshot:
    records: dict[Airline, tuple[TweetRecord, ...]]
    loaded_at: datetime

    @classmethod
    def from_store(cls, store: TweetStore) -> "ApiSnapshot":
        records = {}
        for airline in store.airlines():
            records[airline] = tuple(store.load_all(airline))
        return cls(records=records, loaded_at=datetime.now(timezone.utc))


def _parse_day(value: str | None, name: str) -> date | None:
    if value is None:
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise HTTPException(422, f"{name} must be YYYY-MM-DD")


def _nan_to_none(values) -> list[float | None]:
    return [None if (isinstance(v, float) and math.isnan(v)) else float(v) for v in values]


def create_app(config: PipelineConfig | None = None, static_dir: str | Path | None = None) -> FastAPI:
    config = config or PipelineConfig()
    store = TweetStore(config.data_dir)

    @asynccontextmanager
    async def _lifespan(app: FastAPI):
        app.state.snapshot = ApiSnapshot.from_store(store)
        yield

    app = FastAPI(title="airsent", version="0.1.0", lifespan=_lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.state.snapshot = None

    @app.post("/api/refresh")
    def refresh():
        app.state.snapshot = ApiSnapshot.from_store(store)
        snapshot: ApiSnapshot = app.state.snapshot
        return {
            "schema_version": SCHEMA_VERSION,
            "loaded_at": snapshot.loaded_at.isoformat(),
            "airlines": len(snapshot.records),
        }

    def _snapshot() -> ApiSnapshot:
        snapshot = app.state.snapshot
        if snapshot is None:
            raise HTTPException(503, "snapshot not loaded yet")
        return snapshot

    def _airline(name: str) -> Airline:
        try:
            return Airline.from_string(name)
        except ValueError:
            raise HTTPException(404, f"unknown airline {name!r}")

    def _airline_records(snapshot: ApiSnapshot, airline: Airline) -> tuple[TweetRecord, ...]:
        if airline not in snapshot.records:
            raise HTTPException(404, f"no data for airline {airline.value!r}")
        return snapshot.records[airline]

    def _analytics(airline_name: str, window: int, k: float,
                   date_from: str | None, date_to: str | None):
        snapshot = _snapshot()
        airline = _airline(airline_name)
        records = _airline_records(snapshot, airline)
        if window < 1:
            raise HTTPException(422, "window must be >= 1")
        if k <= 0:
            raise HTTPException(422, "k must be positive")
        start = _parse_day(date_from, "from")
        end = _parse_day(date_to, "to")
        if start is None:
            start = min(r.created_at.date() for r in records)
        if end is None:
            end = max(r.created_at.date() for r in records)
        if start > end:
            raise HTTPException(422, "from must not exceed to")
        in_range = [r for r in records if start <= r.created_at.date() <= end]
        try:
            return compute_analytics(
                in_range, airline, start, end,
                window=window, multiplier=k,
                normalization=config.normalization(),
            ), start, end
        except ValueError as exc:
            raise HTTPException(422, str(exc))

    @app.get("/api/airlines")
    def airlines():
        snapshot = _snapshot()
        out = []
        for airline in sorted(snapshot.records, key=lambda a: a.value):
            records = snapshot.records[airline]
            days = sorted(r.created_at.date() for r in records)
            out.append({
                "airline": airline.value,
                "n_records": len(records),
                "first_date": days[0].isoformat() if days else None,
                "last_date": days[-1].isoformat() if days else None,
            })
        return {"schema_version": SCHEMA_VERSION, "airlines": out}

    @app.get("/api/series/{airline_name}")
    def series(airline_name: str,
               window: int | None = QueryParam(default=None),
               k: float | None = QueryParam(default=None),
               date_from: str | None = QueryParam(default=None, alias="from"),
               date_to: str | None = QueryParam(default=None, alias="to")):
        window = config.window if window is None else window
        k = config.multiplier if k is None else k
        analytics, start, end = _analytics(airline_name, window, k, date_from, date_to)
        s, b = analytics.series, analytics.bands
        direction_by_date = {br.date: br.direction for br in analytics.breakouts}
        return {
            "schema_version": SCHEMA_VERSION,
            "airline": analytics.airline.value,
            "window": window,
            "k": k,
            "from": start.isoformat(),
            "to": end.isoformat(),
            "dates": [d.isoformat() for d in s.dates],
            "n_tweets": [p.n_tweets for p in s.points],
            "n_positive": [p.n_positive for p in s.points],
            "n_negative": [p.n_negative for p in s.points],
            "raw_score": [p.raw_score for p in s.points],
            "z": [float(v) for v in s.z_scores],
            "sma": _nan_to_none(b.sma),
            "upper": _nan_to_none(b.upper),
            "lower": _nan_to_none(b.lower),
            "breakout_direction": [direction_by_date.get(d) for d in s.dates],
        }

    @app.get("/api/breakouts/{airline_name}")
    def breakouts(airline_name: str,
                  window: int | None = QueryParam(default=None),
                  k: float | None = QueryParam(default=None),
                  date_from: str | None = QueryParam(default=None, alias="from"),
                  date_to: str | None = QueryParam(default=None, alias="to")):
        window = config.window if window is None else window
        k = config.multiplier if k is None else k
        analytics, start, end = _analytics(airline_name, window, k, date_from, date_to)
        run_for_date = {}
        for attribution in analytics.attributions:
            day = attribution.start
            while day <= attribution.end:
                run_for_date[day] = attribution
                day += timedelta(days=1)
        out = []
        for b in analytics.breakouts:
            attribution = run_for_date[b.date]
            out.append({
                "date": b.date.isoformat(),
                "direction": b.direction,
                "z": b.z_value,
                "band": b.band_value,
                "gap": b.gap,
                "run_start": attribution.start.isoformat(),
                "run_end": attribution.end.isoformat(),
                "top_words": [[w, c] for w, c in attribution.table.entries],
            })
        return {
            "schema_version": SCHEMA_VERSION,
            "airline": analytics.airline.value,
            "window": window,
            "k": k,
            "from": start.isoformat(),
            "to": end.isoformat(),
            "breakouts": out,
        }

    @app.get("/api/search/{airline_name}")
    def search(airline_name: str,
               q: str = QueryParam(default=""),
               date_from: str | None = QueryParam(default=None, alias="from"),
               date_to: str | None = QueryParam(default=None, alias="to"),
               cursor: int = QueryParam(default=0, ge=0),
               page_size: int = QueryParam(default=DEFAULT_PAGE_SIZE, ge=1, le=500)):
        snapshot = _snapshot()
        airline = _airline(airline_name)
        if not q.strip():
            raise HTTPException(422, "q must be non-empty")
        records = _airline_records(snapshot, airline)
        hits = keyword_search(
            records, q, config.normalization(),
            start=_parse_day(date_from, "from"), end=_parse_day(date_to, "to"),
        )
        page = hits[cursor:cursor + page_size]
        next_cursor = cursor + page_size if cursor + page_size < len(hits) else None
        return {
            "schema_version": SCHEMA_VERSION,
            "airline": airline.value,
            "q": q,
            "total": len(hits),
            "next_cursor": next_cursor,
            "items": [
                {
                    "tweet_id": r.tweet_id,
                    "created_at": r.created_at.isoformat().replace("+00:00", "Z"),
                    "text": r.text,
                    "p_positive": r.p_positive,
                    "p_negative": r.p_negative,
                }
                for r in page
            ],
        }

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="dashboard")

    return app
