"""File-backed tweet store: append-only JSONL per airline per UTC day,
deduplication index, exclusive-writer locking, and fetch-window planning."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .airlines import Airline
from .query import Query, matches
from .records import RecordError, TweetRecord

MAX_RESULTS_PER_WINDOW = 500
WINDOWS_PER_DAY = 8


class StoreError(RuntimeError):
    pass


class WriterLockHeld(StoreError):
    """A second concurrent writer tried to open the same airline partition."""


@dataclass(frozen=True)
class FetchWindow:
    start: datetime
    end: datetime
    max_results: int = MAX_RESULTS_PER_WINDOW

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError("window start must precede end")
        if not (0 < self.max_results <= MAX_RESULTS_PER_WINDOW):
            raise ValueError(f"max_results must be in 1..{MAX_RESULTS_PER_WINDOW}")


def plan_windows(day: date) -> list[FetchWindow]:
    """Split a UTC day into 8 contiguous 3-hour windows of up to 500 results
    each (daily ceiling 4000)."""
    midnight = datetime.combine(day, time(0, 0), tzinfo=timezone.utc)
    step = timedelta(hours=24 // WINDOWS_PER_DAY)
    return [
        FetchWindow(start=midnight + i * step, end=midnight + (i + 1) * step)
        for i in range(WINDOWS_PER_DAY)
    ]


@dataclass
class IngestReport:
    accepted: int = 0
    duplicates: int = 0
    rejected: int = 0
    reasons: list[str] = field(default_factory=list)


class TweetStore:
    """Single-writer, many-reader store rooted at a data directory.

    Layout: ``<root>/<airline>/<YYYY-MM-DD>.jsonl`` plus ``_ids.txt``
    (one seen tweet_id per line) used for deduplication.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    # -- paths ---------------------------------------------------------

    def _airline_dir(self, airline: Airline) -> Path:
        return self.root / airline.value

    def _day_path(self, airline: Airline, day: date) -> Path:
        return self._airline_dir(airline) / f"{day.isoformat()}.jsonl"

    def _index_path(self, airline: Airline) -> Path:
        return self._airline_dir(airline) / "_ids.txt"

    def _lock_path(self, airline: Airline) -> Path:
        return self._airline_dir(airline) / ".lock"

    # -- locking -------------------------------------------------------

    def _acquire_lock(self, airline: Airline) -> int:
        self._airline_dir(airline).mkdir(parents=True, exist_ok=True)
        try:
            return os.open(self._lock_path(airline), os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise WriterLockHeld(
                f"another writer holds the lock for {airline.value}; "
                f"remove {self._lock_path(airline)} if it is stale"
            ) from None

    def _release_lock(self, airline: Airline, fd: int) -> None:
        os.close(fd)
        self._lock_path(airline).unlink(missing_ok=True)

    # -- reads ---------------------------------------------------------

    def seen_ids(self, airline: Airline) -> set[str]:
        path = self._index_path(airline)
        if not path.exists():
            return set()
        return set(path.read_text(encoding="utf-8").split())

    def airlines(self) -> list[Airline]:
        found = []
        if self.root.exists():
            for entry in sorted(p.name for p in self.root.iterdir() if p.is_dir()):
                try:
                    found.append(Airline(entry))
                except ValueError:
                    continue
        return found

    def days(self, airline: Airline) -> list[date]:
        adir = self._airline_dir(airline)
        if not adir.exists():
            return []
        out = []
        for p in sorted(adir.glob("*.jsonl")):
            out.append(date.fromisoformat(p.stem))
        return out

    def load_range(self, airline: Airline, start: date, end: date) -> list[TweetRecord]:
        """All records with created_at date in [start, end], ordered by
        (created_at, tweet_id)."""
        if start > end:
            raise ValueError(f"empty range: {start} > {end}")
        records: list[TweetRecord] = []
        day = start
        while day <= end:
            path = self._day_path(airline, day)
            if path.exists():
                with path.open(encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if line:
                            records.append(TweetRecord.from_json(line))
            day += timedelta(days=1)
        records.sort(key=lambda r: (r.created_at, r.tweet_id))
        return records

    def load_all(self, airline: Airline) -> list[TweetRecord]:
        days = self.days(airline)
        if not days:
            return []
        return self.load_range(airline, days[0], days[-1])

    # -- writes --------------------------------------------------------

    def ingest(
        self,
        source: Iterable[str],
        airline: Airline,
        query: Query,
    ) -> IngestReport:
        """Append records matching the query; skip duplicates; count the rest.

        Re-ingesting the same source is a no-op (idempotent).
        """
        report = IngestReport()
        fd = self._acquire_lock(airline)
        try:
            seen = self.seen_ids(airline)
            appended: dict[date, list[TweetRecord]] = {}
            new_ids: list[str] = []
            for lineno, line in enumerate(source, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = TweetRecord.from_json(line, airline=airline)
                except RecordError as exc:
                    report.rejected += 1
                    report.reasons.append(f"line {lineno}: {exc}")
                    continue
                if not matches(query, record):
                    report.rejected += 1
                    continue
                if record.tweet_id in seen:
                    report.duplicates += 1
                    continue
                seen.add(record.tweet_id)
                new_ids.append(record.tweet_id)
                appended.setdefault(record.created_at.date(), []).append(record)
                report.accepted += 1
            for day, records in sorted(appended.items()):
                path = self._day_path(airline, day)
                with path.open("a", encoding="utf-8") as fh:
                    for record in records:
                        fh.write(record.to_json() + "\n")
            if new_ids:
                with self._index_path(airline).open("a", encoding="utf-8") as fh:
                    fh.write("\n".join(new_ids) + "\n")
        finally:
            self._release_lock(airline, fd)
        return report

    def rewrite_day(self, airline: Airline, day: date, records: list[TweetRecord]) -> None:
        """Replace one day file atomically (used when scores are filled in)."""
        fd = self._acquire_lock(airline)
        try:
            path = self._day_path(airline, day)
            tmp = path.with_suffix(".jsonl.tmp")
            with tmp.open("w", encoding="utf-8") as fh:
                for record in sorted(records, key=lambda r: (r.created_at, r.tweet_id)):
                    if record.created_at.date() != day:
                        raise StoreError(
                            f"tweet {record.tweet_id} dated {record.created_at.date()} "
                            f"does not belong in {day}"
                        )
                    fh.write(record.to_json() + "\n")
            os.replace(tmp, path)
        finally:
            self._release_lock(airline, fd)

    def iter_days(self, airline: Airline) -> Iterator[tuple[date, list[TweetRecord]]]:
        for day in self.days(airline):
            yield day, self.load_range(airline, day, day)
