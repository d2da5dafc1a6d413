"""End-to-end sentiment model: normalization + TF-IDF + SVM + Platt,
trained as one unit and persisted as one file."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import svm as _svm
from . import tfidf as _tfidf
from .dataset import LabeledText, stratified_split
from .textprep import NormalizationConfig, clean, lemmatize, stem, stopwords, tokenize

PIPELINE_FORMAT_VERSION = 1


def normalize_for_training(text: str, config: NormalizationConfig) -> tuple[str, ...]:
    """Training rows have no single airline context, so brand words from
    every carrier are stripped."""
    stop = stopwords()
    brand = frozenset().union(*config.airline_keywords.values())
    tokens = [t for t in tokenize(clean(text)) if t not in stop and t not in brand]
    mapper = stem if config.normalizer == "stem" else lemmatize
    return tuple(mapper(t) for t in tokens)


def scale_gamma(vectors: Sequence[_tfidf.SparseVector]) -> float:
    """gamma = 1 / (n_features * var(entries)) over the dense training
    matrix, zeros included."""
    dim = vectors[0].dimension
    n = len(vectors)
    total = sum(float(np.sum(v.values)) for v in vectors)
    total_sq = sum(float(np.dot(v.values, v.values)) for v in vectors)
    count = n * dim
    mean = total / count
    var = total_sq / count - mean * mean
    if var <= 0:
        var = 1.0
    return 1.0 / (dim * var)


@dataclass
class TrainOptions:
    C: float = 1.0
    gamma: float | None = None          # None = scale heuristic
    kernel_kind: str = "rbf"
    tol: float = 1e-3
    seed: int = 7
    test_fraction: float = 0.2
    tfidf_variant: _tfidf.Variant = "multiplicative"
    platt_folds: int = 3
    max_passes: int = 10_000


@dataclass
class SentimentPipeline:
    normalization: NormalizationConfig
    tfidf_model: _tfidf.TfidfModel
    svm_model: _svm.SvmModel

    def vectorize_text(self, text: str) -> _tfidf.SparseVector:
        return self.tfidf_model.transform(normalize_for_training(text, self.normalization))

    def score_text(self, text: str) -> _svm.SentimentScore:
        return self.svm_model.predict(self.vectorize_text(text))

    def score_texts(self, texts: Sequence[str]) -> list[_svm.SentimentScore]:
        vectors = [self.vectorize_text(t) for t in texts]
        return self.svm_model.predict_many(vectors)

    def save(self, path: str | Path) -> None:
        doc = {
            "format_version": PIPELINE_FORMAT_VERSION,
            "kind": "sentiment_pipeline",
            "normalizer": self.normalization.normalizer,
            "stopword_list_version": self.normalization.stopword_list_version,
            "tfidf": self.tfidf_model.to_dict(),
            "svm": self.svm_model.to_dict(),
        }
        Path(path).write_text(json.dumps(doc), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SentimentPipeline":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ValueError(f"corrupt pipeline file {path}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("kind") != "sentiment_pipeline":
            raise ValueError(f"not a sentiment pipeline file: {path}")
        if doc.get("format_version") != PIPELINE_FORMAT_VERSION:
            raise ValueError(f"unsupported pipeline format version in {path}")
        tfidf_model = _tfidf.TfidfModel.from_dict(doc["tfidf"])
        svm_model = _svm.SvmModel.from_dict(doc["svm"])
        return cls(
            normalization=NormalizationConfig(
                stopword_list_version=doc["stopword_list_version"],
                normalizer=doc["normalizer"],
            ),
            tfidf_model=tfidf_model,
            svm_model=svm_model,
        )


@dataclass
class TrainResult:
    pipeline: SentimentPipeline
    test_metrics: _svm.Metrics
    full_metrics: _svm.Metrics
    n_train: int
    n_test: int
    options: TrainOptions


def _vectors_for(rows: list[LabeledText], model: _tfidf.TfidfModel,
                 config: NormalizationConfig) -> _svm.LabeledDataset:
    docs = [normalize_for_training(r.text, config) for r in rows]
    return _svm.LabeledDataset(
        vectors=tuple(model.transform(d) for d in docs),
        labels=tuple(r.label for r in rows),
    )


def _cv_decision_values(train: _svm.LabeledDataset, kernel: _svm.KernelSpec,
                        options: TrainOptions) -> tuple[np.ndarray, np.ndarray]:
    """Out-of-sample decision values via k-fold CV on the training set;
    fitting the sigmoid on in-sample values would overstate confidence."""
    n = len(train)
    folds = max(2, options.platt_folds)
    rng = np.random.default_rng(options.seed)
    order = rng.permutation(n)
    values = np.zeros(n)
    labels = np.array(train.labels)
    for fold in range(folds):
        held = order[fold::folds]
        held_set = set(int(i) for i in held)
        keep = [i for i in range(n) if i not in held_set]
        sub = _svm.LabeledDataset(
            vectors=tuple(train.vectors[i] for i in keep),
            labels=tuple(train.labels[i] for i in keep),
        )
        if not sub.has_both_classes:
            raise ValueError("a CV fold lost one class; reduce platt_folds")
        model = _svm.train_smo(sub, kernel, C=options.C, tol=options.tol,
                               max_passes=options.max_passes)
        fold_vectors = [train.vectors[int(i)] for i in held]
        values[held] = model.decision_values(fold_vectors)
    return values, labels


def train(rows: list[LabeledText],
          normalization: NormalizationConfig | None = None,
          options: TrainOptions | None = None) -> TrainResult:
    normalization = normalization or NormalizationConfig()
    options = options or TrainOptions()

    train_rows, test_rows = stratified_split(rows, options.test_fraction, options.seed)
    train_docs = [normalize_for_training(r.text, normalization) for r in train_rows]
    tfidf_model = _tfidf.fit(train_docs, variant=options.tfidf_variant, l2_normalize=True)

    train_set = _svm.LabeledDataset(
        vectors=tuple(tfidf_model.transform(d) for d in train_docs),
        labels=tuple(r.label for r in train_rows),
    )
    gamma = options.gamma if options.gamma is not None else scale_gamma(train_set.vectors)
    kernel = _svm.KernelSpec.from_gamma(gamma, kind=options.kernel_kind)

    svm_model = _svm.train_smo(train_set, kernel, C=options.C, tol=options.tol,
                               max_passes=options.max_passes)
    cv_values, cv_labels = _cv_decision_values(train_set, kernel, options)
    a, b = _svm.fit_platt(cv_values, cv_labels)
    svm_model.platt_a = a
    svm_model.platt_b = b

    pipeline = SentimentPipeline(
        normalization=normalization,
        tfidf_model=tfidf_model,
        svm_model=svm_model,
    )
    test_set = _vectors_for(test_rows, tfidf_model, normalization)
    full_set = _vectors_for(rows, tfidf_model, normalization)
    return TrainResult(
        pipeline=pipeline,
        test_metrics=_svm.evaluate(svm_model, test_set),
        full_metrics=_svm.evaluate(svm_model, full_set),
        n_train=len(train_rows),
        n_test=len(test_rows),
        options=options,
    )
