import dataclasses
import json
import pathlib
from datetime import date, datetime, timedelta, timezone

import pytest

from airsent.airlines import Airline
from airsent.dataset import _FILLER_WORDS, _NEGATIVE_WORDS, _POSITIVE_WORDS
from airsent.records import TweetRecord
from airsent.textprep import NormalizationConfig

FIXTURE_START = date(2022, 3, 1)
FIXTURE_DAYS = 60
TWEETS_PER_DAY = 30
ANOMALY_TOKEN = "meltdowngate"
ANOMALY_DAY_INDEX = {Airline.UNITED: 40, Airline.DELTA: 25}
FIXTURE_AIRLINES = (Airline.UNITED, Airline.DELTA)

_QUERY_PHRASE = {
    Airline.UNITED: "@united",
    Airline.DELTA: "@delta",
}


def _normal_day_texts(airline: Airline) -> list[str]:
    """The same 30 texts every normal day: 15 positive, 15 negative, so the
    daily score is identical across normal days and only the scripted
    anomaly can move the series."""
    mention = _QUERY_PHRASE[airline]
    texts = []
    for i in range(TWEETS_PER_DAY // 2):
        pos = _POSITIVE_WORDS[i % len(_POSITIVE_WORDS)]
        pos2 = _POSITIVE_WORDS[(i + 7) % len(_POSITIVE_WORDS)]
        fill = _FILLER_WORDS[i % len(_FILLER_WORDS)]
        texts.append(f"{mention} the {fill} was {pos} and {pos2} today")
    for i in range(TWEETS_PER_DAY // 2):
        neg = _NEGATIVE_WORDS[i % len(_NEGATIVE_WORDS)]
        neg2 = _NEGATIVE_WORDS[(i + 5) % len(_NEGATIVE_WORDS)]
        fill = _FILLER_WORDS[(i + 3) % len(_FILLER_WORDS)]
        texts.append(f"{mention} the {fill} was {neg} and {neg2} today")
    return texts


def _anomaly_day_texts(airline: Airline) -> list[str]:
    mention = _QUERY_PHRASE[airline]
    texts = []
    for i in range(TWEETS_PER_DAY):
        neg = _NEGATIVE_WORDS[i % len(_NEGATIVE_WORDS)]
        neg2 = _NEGATIVE_WORDS[(i + 3) % len(_NEGATIVE_WORDS)]
        texts.append(f"{mention} {ANOMALY_TOKEN} {ANOMALY_TOKEN} {neg} {neg2} chaos")
    return texts


def fixture_day_texts(airline: Airline, day_index: int) -> list[str]:
    if day_index == ANOMALY_DAY_INDEX[airline]:
        return _anomaly_day_texts(airline)
    return _normal_day_texts(airline)


def anomaly_date(airline: Airline) -> date:
    return FIXTURE_START + timedelta(days=ANOMALY_DAY_INDEX[airline])


def write_fixture_jsonl(path, airline: Airline) -> int:
    """Raw ingestion file for one airline: 60 days x 30 tweets."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for day_index in range(FIXTURE_DAYS):
            day = FIXTURE_START + timedelta(days=day_index)
            for i, text in enumerate(fixture_day_texts(airline, day_index)):
                created = datetime(day.year, day.month, day.day,
                                   hour=(i * 5) % 24, minute=i % 60,
                                   tzinfo=timezone.utc)
                fh.write(json.dumps({
                    "tweet_id": f"{airline.value}-{day.isoformat()}-{i:03d}",
                    "text": text,
                    "created_at": created.isoformat().replace("+00:00", "Z"),
                    "author_id": f"user{i}",
                    "author_location": None,
                    "lang": "en",
                    "is_retweet": False,
                }) + "\n")
                n += 1
    return n


def make_record(tweet_id="t1", text="hello world", day=date(2022, 1, 1),
                hour=12, airline=Airline.UNITED, lang="en", is_retweet=False,
                p_positive=None, p_negative=None) -> TweetRecord:
    return TweetRecord(
        tweet_id=tweet_id,
        text=text,
        created_at=datetime(day.year, day.month, day.day, hour, tzinfo=timezone.utc),
        author_id="author",
        airline=airline,
        lang=lang,
        is_retweet=is_retweet,
        p_positive=p_positive,
        p_negative=p_negative,
    )


@pytest.fixture
def norm_config() -> NormalizationConfig:
    return NormalizationConfig()


@dataclasses.dataclass
class PipelineEnv:
    root: "pathlib.Path"
    config_path: "pathlib.Path"
    data_dir: "pathlib.Path"
    model_path: "pathlib.Path"

    def run(self, *args: str):
        from click.testing import CliRunner

        from airsent.cli import main as cli_main

        result = CliRunner().invoke(cli_main, list(args))
        return result


def _run_ok(env: PipelineEnv, *args: str) -> str:
    result = env.run(*args)
    assert result.exit_code == 0, f"{args}: {result.output}\n{result.exception}"
    return result.output


@pytest.fixture(scope="session")
def pipeline_env(tmp_path_factory) -> PipelineEnv:
    """Fully operated pipeline on the bundled fixture corpus: two airlines,
    60 days, one scripted anomaly each; ingested, trained, and scored via
    the CLI."""
    from importlib import resources

    root = tmp_path_factory.mktemp("e2e")
    config_path = root / "config.json"
    config_path.write_text(json.dumps({"data_dir": "data", "seed": 7}) + "\n")
    env = PipelineEnv(
        root=root,
        config_path=config_path,
        data_dir=root / "data",
        model_path=root / "model.json",
    )
    for airline in FIXTURE_AIRLINES:
        raw = root / f"raw_{airline.value}.jsonl"
        write_fixture_jsonl(raw, airline)
        _run_ok(env, "ingest", "--config", str(config_path),
                "--airline", airline.value, str(raw))
    corpus = resources.files("airsent.data").joinpath("synthetic_500.csv")
    _run_ok(env, "train", "--config", str(config_path),
            "--model", str(env.model_path), str(corpus))
    last = FIXTURE_START + timedelta(days=FIXTURE_DAYS - 1)
    for airline in FIXTURE_AIRLINES:
        _run_ok(env, "score", "--config", str(config_path),
                "--model", str(env.model_path), "--airline", airline.value,
                "--from", FIXTURE_START.isoformat(), "--to", last.isoformat())
    return env
