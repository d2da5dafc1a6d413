import csv
import hashlib
import io
from datetime import timedelta

import pytest
from fastapi.testclient import TestClient

from airsent.airlines import Airline
from airsent.config import PipelineConfig
from airsent.service import create_app
from airsent.store import TweetStore
from airsent.textprep import NormalizationConfig, normalize_doc
from tests.conftest import (ANOMALY_TOKEN, FIXTURE_AIRLINES, FIXTURE_DAYS,
                            FIXTURE_START, TWEETS_PER_DAY, anomaly_date)

LAST_DAY = FIXTURE_START + timedelta(days=FIXTURE_DAYS - 1)


@pytest.fixture(scope="module")
def client(pipeline_env):
    app = create_app(PipelineConfig(data_dir=pipeline_env.data_dir))
    with TestClient(app) as c:
        yield c


def data_checksum(data_dir):
    digest = hashlib.sha256()
    for path in sorted(data_dir.rglob("*")):
        if path.is_file():
            digest.update(str(path.relative_to(data_dir)).encode())
            digest.update(path.read_bytes())
    return digest.hexdigest()


def test_airlines_endpoint(client, pipeline_env):
    body = client.get("/api/airlines").json()
    assert body["schema_version"] == 1
    entries = body["airlines"]
    assert [e["airline"] for e in entries] == sorted(
        a.value for a in FIXTURE_AIRLINES)
    store = TweetStore(pipeline_env.data_dir)
    for entry in entries:
        airline = Airline.from_string(entry["airline"])
        assert entry["n_records"] == len(store.load_all(airline))
        assert entry["first_date"] == FIXTURE_START.isoformat()
        assert entry["last_date"] == LAST_DAY.isoformat()


def test_empty_store_returns_empty_list(tmp_path):
    app = create_app(PipelineConfig(data_dir=tmp_path / "nothing"))
    with TestClient(app) as c:
        response = c.get("/api/airlines")
        assert response.status_code == 200
        assert response.json()["airlines"] == []


def test_series_payload_shape_and_defaults(client):
    body = client.get("/api/series/united").json()
    n = FIXTURE_DAYS
    assert body["window"] == 14 and body["k"] == 2.0
    assert len(body["dates"]) == n
    for key in ("n_tweets", "n_positive", "n_negative", "raw_score", "z",
                "sma", "upper", "lower", "breakout_direction"):
        assert len(body[key]) == n
    assert body["dates"][0] == FIXTURE_START.isoformat()
    assert all(v is None for v in body["sma"][:13])
    assert all(v is not None for v in body["sma"][13:])
    assert all(v == TWEETS_PER_DAY for v in body["n_tweets"])
    dip = anomaly_date(Airline.UNITED)
    i = (dip - FIXTURE_START).days
    assert body["breakout_direction"][i] == "below_lower"
    assert [d for d in body["breakout_direction"] if d] == ["below_lower"]


def test_series_parameters_change_result(client):
    b7 = client.get("/api/series/united", params={"window": 7}).json()
    b30 = client.get("/api/series/united", params={"window": 30}).json()
    assert b7["sma"] != b30["sma"]
    assert sum(v is None for v in b7["sma"]) == 6
    assert sum(v is None for v in b30["sma"]) == 29


def test_series_validation_errors(client):
    assert client.get("/api/series/united", params={"window": 0}).status_code == 422
    assert client.get("/api/series/united", params={"k": 0}).status_code == 422
    assert client.get("/api/series/united",
                      params={"from": "2022-04-01", "to": "2022-03-01"}).status_code == 422
    assert client.get("/api/series/united",
                      params={"from": "not-a-date"}).status_code == 422
    assert client.get("/api/series/concorde").status_code == 404
    assert client.get("/api/series/spirit").status_code == 404  # no data


def test_breakouts_endpoint(client):
    body = client.get("/api/breakouts/united").json()
    assert len(body["breakouts"]) == 1
    b = body["breakouts"][0]
    dip = anomaly_date(Airline.UNITED).isoformat()
    assert b["date"] == dip
    assert b["direction"] == "below_lower"
    assert b["run_start"] == dip and b["run_end"] == dip
    assert b["z"] < b["band"]
    assert b["gap"] == pytest.approx(abs(b["z"] - b["band"]))
    assert b["top_words"][0][0] == ANOMALY_TOKEN
    assert len(b["top_words"]) == 5
    counts = [c for _, c in b["top_words"]]
    assert counts == sorted(counts, reverse=True)


def test_identical_requests_identical_bytes(client):
    a = client.get("/api/series/delta", params={"window": 9, "k": 1.5})
    b = client.get("/api/series/delta", params={"window": 9, "k": 1.5})
    assert a.content == b.content


def test_search_endpoint(client, pipeline_env):
    store = TweetStore(pipeline_env.data_dir)
    config = NormalizationConfig()
    records = store.load_all(Airline.UNITED)
    expected = [r.tweet_id for r in records
                if "cancel" in normalize_doc(r, config).tokens]
    body = client.get("/api/search/united",
                      params={"q": "canceled", "page_size": 500}).json()
    assert body["total"] == len(expected)
    assert [item["tweet_id"] for item in body["items"]] == expected
    item = body["items"][0]
    assert set(item) == {"tweet_id", "created_at", "text", "p_positive",
                         "p_negative"}


def test_search_pagination_partitions_results(client):
    seen = []
    cursor = 0
    while cursor is not None:
        body = client.get("/api/search/united",
                          params={"q": "cancel", "cursor": cursor,
                                  "page_size": 7}).json()
        seen.extend(item["tweet_id"] for item in body["items"])
        cursor = body["next_cursor"]
    assert len(seen) == len(set(seen)) == body["total"]


def test_search_anomaly_token(client):
    body = client.get("/api/search/united",
                      params={"q": ANOMALY_TOKEN, "page_size": 100}).json()
    assert body["total"] == TWEETS_PER_DAY
    days = {item["created_at"][:10] for item in body["items"]}
    assert days == {anomaly_date(Airline.UNITED).isoformat()}


def test_search_validation(client):
    assert client.get("/api/search/united", params={"q": "  "}).status_code == 422
    assert client.get("/api/search/concorde", params={"q": "x"}).status_code == 404
    body = client.get("/api/search/united", params={"q": "zzzqqq"}).json()
    assert body["total"] == 0 and body["items"] == []


def test_503_before_first_snapshot(pipeline_env):
    app = create_app(PipelineConfig(data_dir=pipeline_env.data_dir))
    # no lifespan startup: the snapshot has not been loaded yet
    bare = TestClient(app)
    assert bare.get("/api/airlines").status_code == 503


def test_refresh_swaps_snapshot(client):
    body = client.post("/api/refresh").json()
    assert body["airlines"] == len(FIXTURE_AIRLINES)


def test_service_is_read_only(client, pipeline_env):
    before = data_checksum(pipeline_env.data_dir)
    client.get("/api/airlines")
    client.get("/api/series/united", params={"window": 5})
    client.get("/api/breakouts/delta")
    client.get("/api/search/united", params={"q": "cancel"})
    client.post("/api/refresh")
    assert data_checksum(pipeline_env.data_dir) == before


def test_api_matches_report_csv(client, pipeline_env, tmp_path):
    """Field-for-field equivalence between the CLI report CSV and the API."""
    out = tmp_path / "report"
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "united",
        "--from", FIXTURE_START.isoformat(), "--to", LAST_DAY.isoformat(),
        "--out", str(out), "--no-figures")
    assert result.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(
        (out / "united_series.csv").read_text())))
    body = client.get("/api/series/united").json()
    assert [r["date"] for r in rows] == body["dates"]
    for i, row in enumerate(rows):
        assert int(row["n_tweets"]) == body["n_tweets"][i]
        assert float(row["z"]) == body["z"][i]
        if row["sma"] == "":
            assert body["sma"][i] is None
        else:
            assert float(row["sma"]) == body["sma"][i]
            assert float(row["upper"]) == body["upper"][i]
            assert float(row["lower"]) == body["lower"][i]
        direction = body["breakout_direction"][i]
        assert row["breakout_direction"] == (direction or "")
