import numpy as np
import pytest

from airsent.dataset import make_synthetic_corpus
from airsent.pipeline import (SentimentPipeline, TrainOptions,
                              normalize_for_training, scale_gamma, train)
from airsent.textprep import NormalizationConfig
from airsent.tfidf import fit as tfidf_fit


@pytest.fixture(scope="module")
def trained():
    rows = make_synthetic_corpus(120, seed=3)
    return train(rows, options=TrainOptions(seed=7)), rows


def test_normalize_for_training_strips_all_brands():
    config = NormalizationConfig()
    tokens = normalize_for_training(
        "@united and @delta both canceled my flights", config)
    assert "united" not in tokens and "delta" not in tokens
    assert "cancel" in tokens and "flight" in tokens


def test_scale_gamma_matches_dense_recomputation():
    corpus = [["good", "flight"], ["bad", "flight", "flight"], ["ok"]]
    model = tfidf_fit(corpus)
    vectors = model.transform_many(corpus)
    dense = np.stack([v.to_dense() for v in vectors])
    expected = 1.0 / (dense.shape[1] * float(np.var(dense)))
    assert scale_gamma(vectors) == pytest.approx(expected, rel=1e-12)


def test_training_reaches_high_accuracy(trained):
    result, rows = trained
    assert result.n_train + result.n_test == len(rows)
    assert result.test_metrics.accuracy >= 0.9
    assert result.full_metrics.accuracy >= 0.9
    model = result.pipeline.svm_model
    assert model.has_platt
    assert model.platt_a < 0  # probability rises with the decision value


def test_training_is_deterministic():
    rows = make_synthetic_corpus(80, seed=5)
    r1 = train(rows, options=TrainOptions(seed=7))
    r2 = train(rows, options=TrainOptions(seed=7))
    assert r1.test_metrics == r2.test_metrics
    assert r1.pipeline.svm_model.bias == r2.pipeline.svm_model.bias
    assert r1.pipeline.svm_model.platt_a == r2.pipeline.svm_model.platt_a


def test_scores_sum_to_one_and_classify_sensibly(trained):
    result, _ = trained
    pipeline = result.pipeline
    pos = pipeline.score_text("great friendly helpful crew thank you")
    neg = pipeline.score_text("terrible awful delayed lost luggage")
    for score in (pos, neg):
        assert score.p_positive + score.p_negative == 1.0
        assert 0.0 < score.p_positive < 1.0
    assert pos.label == "positive"
    assert neg.label == "negative"


def test_pipeline_round_trip_identical_scores(tmp_path, trained):
    result, _ = trained
    path = tmp_path / "pipeline.json"
    result.pipeline.save(path)
    back = SentimentPipeline.load(path)
    texts = [
        "wonderful smooth easy boarding",
        "angry about the broken seat and rude staff",
        "gate",
        "",
    ]
    assert back.score_texts(texts) == result.pipeline.score_texts(texts)
    assert back.normalization.normalizer == result.pipeline.normalization.normalizer


def test_pipeline_load_rejects_other_documents(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"kind": "something_else"}')
    with pytest.raises(ValueError):
        SentimentPipeline.load(path)
    path.write_text("{bad json")
    with pytest.raises(ValueError):
        SentimentPipeline.load(path)
