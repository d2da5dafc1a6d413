import json
from datetime import timedelta
from importlib import resources

from airsent.airlines import Airline
from airsent.store import TweetStore
from tests.conftest import (ANOMALY_TOKEN, FIXTURE_AIRLINES, FIXTURE_DAYS,
                            FIXTURE_START, TWEETS_PER_DAY, anomaly_date,
                            write_fixture_jsonl)

LAST_DAY = FIXTURE_START + timedelta(days=FIXTURE_DAYS - 1)


def test_ingest_reports_counts(pipeline_env):
    # re-ingesting the fixture is a pure duplicate run (idempotence)
    raw = pipeline_env.root / f"raw_{Airline.UNITED.value}.jsonl"
    result = pipeline_env.run("ingest", "--config", str(pipeline_env.config_path),
                              "--airline", "united", str(raw))
    assert result.exit_code == 0
    expected = FIXTURE_DAYS * TWEETS_PER_DAY
    assert f"accepted=0 duplicates={expected} rejected=0" in result.output


def test_ingest_missing_file_is_usage_error(pipeline_env):
    result = pipeline_env.run("ingest", "--config", str(pipeline_env.config_path),
                              "--airline", "united", "no-such-file.jsonl")
    assert result.exit_code == 2


def test_ingest_unknown_airline_is_usage_error(pipeline_env, tmp_path):
    raw = tmp_path / "raw.jsonl"
    write_fixture_jsonl(raw, Airline.UNITED)
    result = pipeline_env.run("ingest", "--config", str(pipeline_env.config_path),
                              "--airline", "concorde", str(raw))
    assert result.exit_code == 2


def test_train_prints_metrics(pipeline_env, tmp_path):
    sample = resources.files("airsent.data").joinpath("kaggle_sample.csv")
    model_path = tmp_path / "tiny-model.json"
    result = pipeline_env.run("train", "--config", str(pipeline_env.config_path),
                              "--model", str(model_path), str(sample))
    assert result.exit_code == 0, result.output
    assert "accuracy=" in result.output and "confusion matrix" in result.output
    assert model_path.exists()


def test_train_same_seed_identical_output(pipeline_env, tmp_path):
    sample = resources.files("airsent.data").joinpath("kaggle_sample.csv")
    outputs = []
    for name in ("m1.json", "m2.json"):
        result = pipeline_env.run(
            "train", "--config", str(pipeline_env.config_path),
            "--seed", "11", "--model", str(tmp_path / name), str(sample))
        assert result.exit_code == 0
        outputs.append(result.output.replace(name, "model.json"))
    assert outputs[0] == outputs[1]
    assert (tmp_path / "m1.json").read_bytes() == (tmp_path / "m2.json").read_bytes()


def test_train_malformed_dataset_is_usage_error(pipeline_env, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    result = pipeline_env.run("train", "--config", str(pipeline_env.config_path),
                              "--model", str(tmp_path / "m.json"), str(bad))
    assert result.exit_code == 2


def test_everything_scored_and_rerun_is_noop(pipeline_env):
    store = TweetStore(pipeline_env.data_dir)
    for airline in FIXTURE_AIRLINES:
        records = store.load_all(airline)
        assert len(records) == FIXTURE_DAYS * TWEETS_PER_DAY
        assert all(r.is_scored for r in records)
        assert all(abs(r.p_positive + r.p_negative - 1.0) <= 1e-9
                   for r in records)
    result = pipeline_env.run(
        "score", "--config", str(pipeline_env.config_path),
        "--model", str(pipeline_env.model_path), "--airline", "united",
        "--from", FIXTURE_START.isoformat(), "--to", LAST_DAY.isoformat())
    assert result.exit_code == 0
    assert "scored=0" in result.output


def test_score_missing_model_is_usage_error(pipeline_env):
    result = pipeline_env.run(
        "score", "--config", str(pipeline_env.config_path),
        "--model", "no-model.json", "--airline", "united",
        "--from", "2022-03-01", "--to", "2022-03-02")
    assert result.exit_code == 2


def test_score_partial_day(pipeline_env, tmp_path):
    # a freshly ingested store gets exactly its unscored records filled
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"data_dir": "data"}))
    raw = tmp_path / "raw.jsonl"
    write_fixture_jsonl(raw, Airline.UNITED)
    head = "\n".join(raw.read_text().splitlines()[:10]) + "\n"
    raw.write_text(head)
    r = pipeline_env.run("ingest", "--config", str(config_path),
                         "--airline", "united", str(raw))
    assert r.exit_code == 0
    r = pipeline_env.run("score", "--config", str(config_path),
                         "--model", str(pipeline_env.model_path),
                         "--airline", "united",
                         "--from", "2022-03-01", "--to", "2022-03-01")
    assert r.exit_code == 0
    assert "scored=10" in r.output


def test_report_writes_expected_files(pipeline_env, tmp_path):
    out = tmp_path / "report"
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "united",
        "--from", FIXTURE_START.isoformat(), "--to", LAST_DAY.isoformat(),
        "--out", str(out))
    assert result.exit_code == 0, result.output
    assert "breakouts=1" in result.output
    day = anomaly_date(Airline.UNITED).isoformat()
    names = {p.name for p in out.iterdir()}
    assert names == {
        "united_series.csv", "united_breakouts.csv",
        f"united_breakout_words_{day}.csv",
        "united_series.png", "united_counts.png",
    }
    words = (out / f"united_breakout_words_{day}.csv").read_text().splitlines()
    assert words[1].startswith(f"{ANOMALY_TOKEN},")


def test_report_no_figures_flag(pipeline_env, tmp_path):
    out = tmp_path / "report"
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "delta", "--no-figures",
        "--from", FIXTURE_START.isoformat(), "--to", LAST_DAY.isoformat(),
        "--out", str(out))
    assert result.exit_code == 0
    assert not list(out.glob("*.png"))
    assert (out / "delta_series.csv").exists()


def test_report_empty_range_is_usage_error(pipeline_env, tmp_path):
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "united", "--from", "2022-05-01", "--to", "2022-04-01",
        "--out", str(tmp_path / "r"))
    assert result.exit_code == 2
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "spirit", "--from", "2022-03-01", "--to", "2022-03-10",
        "--out", str(tmp_path / "r"))
    assert result.exit_code == 2  # no stored records


def test_bad_date_flag_is_usage_error(pipeline_env, tmp_path):
    result = pipeline_env.run(
        "report", "--config", str(pipeline_env.config_path),
        "--airline", "united", "--from", "03/01/2022", "--to", "2022-04-01",
        "--out", str(tmp_path / "r"))
    assert result.exit_code == 2
