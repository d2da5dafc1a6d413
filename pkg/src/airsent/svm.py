"""Soft-margin SVM trained by sequential minimal optimization, with RBF or
linear kernel and Platt-scaled probability outputs."""

from __future__ import annotations

import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from scipy import sparse as sp
from scipy.special import expit

from .tfidf import SparseVector

MODEL_FORMAT_VERSION = 1
ALPHA_SUM_TOL = 1e-6


class TrainingError(RuntimeError):
    pass


class ConvergenceError(TrainingError):
    def __init__(self, message: str, iterations: int, max_kkt_violation: float):
        super().__init__(f"{message} (iterations={iterations}, max KKT violation={max_kkt_violation:.3e})")
        self.iterations = iterations
        self.max_kkt_violation = max_kkt_violation


@dataclass(frozen=True)
class KernelSpec:
    kind: Literal["rbf", "linear"] = "rbf"
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @property
    def gamma(self) -> float:
        return 1.0 / (2.0 * self.sigma * self.sigma)

    @classmethod
    def from_gamma(cls, gamma: float, kind: str = "rbf") -> "KernelSpec":
        return cls(kind=kind, sigma=math.sqrt(1.0 / (2.0 * gamma)))


def kernel_eval(spec: KernelSpec, x: SparseVector, y: SparseVector) -> float:
    if x.dimension != y.dimension:
        raise ValueError(f"dimension mismatch: {x.dimension} vs {y.dimension}")
    xy = x.dot(y)
    if spec.kind == "linear":
        return xy
    sq_dist = x.dot(x) + y.dot(y) - 2.0 * xy
    return math.exp(-max(sq_dist, 0.0) * spec.gamma)


@dataclass(frozen=True)
class LabeledDataset:
    vectors: tuple[SparseVector, ...]
    labels: tuple[int, ...]
    provenance: str = ""

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise ValueError("vectors/labels length mismatch")
        if any(y not in (-1, 1) for y in self.labels):
            raise ValueError("labels must be +1 or -1")

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def has_both_classes(self) -> bool:
        return len(set(self.labels)) == 2


@dataclass(frozen=True)
class SentimentScore:
    p_positive: float
    p_negative: float

    @property
    def label(self) -> Literal["positive", "negative"]:
        return "positive" if self.p_positive > 0.5 else "negative"


@dataclass
class SvmModel:
    support_vectors: list[SparseVector]
    dual_coefficients: np.ndarray  # alpha_i * y_i per support vector
    bias: float
    kernel: KernelSpec
    C: float
    platt_a: float | None = None
    platt_b: float | None = None
    _sv_matrix: sp.csr_matrix | None = field(default=None, repr=False, compare=False)
    _sv_sq_norms: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return self.support_vectors[0].dimension if self.support_vectors else 0

    @property
    def has_platt(self) -> bool:
        return self.platt_a is not None and self.platt_b is not None

    def _ensure_sv_matrix(self):
        if self._sv_matrix is None:
            self._sv_matrix = _to_csr(self.support_vectors)
            self._sv_sq_norms = np.asarray(self._sv_matrix.multiply(self._sv_matrix).sum(axis=1)).ravel()

    def decision_value(self, x: SparseVector) -> float:
        if x.dimension != self.dimension:
            raise ValueError(f"dimension mismatch: {x.dimension} vs {self.dimension}")
        self._ensure_sv_matrix()
        dots = self._sv_matrix @ _to_csr([x]).T
        dots = np.asarray(dots.todense()).ravel()
        if self.kernel.kind == "linear":
            k = dots
        else:
            sq = self._sv_sq_norms + x.dot(x) - 2.0 * dots
            k = np.exp(-np.maximum(sq, 0.0) * self.kernel.gamma)
        return float(np.dot(self.dual_coefficients, k) + self.bias)

    def decision_values(self, xs: Sequence[SparseVector]) -> np.ndarray:
        if not xs:
            return np.empty(0)
        for x in xs:
            if x.dimension != self.dimension:
                raise ValueError(f"dimension mismatch: {x.dimension} vs {self.dimension}")
        self._ensure_sv_matrix()
        X = _to_csr(list(xs))
        dots = (self._sv_matrix @ X.T).toarray()  # n_sv x n_x
        if self.kernel.kind == "linear":
            k = dots
        else:
            x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
            sq = self._sv_sq_norms[:, None] + x_sq[None, :] - 2.0 * dots
            k = np.exp(-np.maximum(sq, 0.0) * self.kernel.gamma)
        return self.dual_coefficients @ k + self.bias

    def predict(self, x: SparseVector) -> SentimentScore:
        if not self.has_platt:
            raise RuntimeError("model has no Platt coefficients; fit_platt first")
        p_pos = sigmoid_probability(self.platt_a, self.platt_b, self.decision_value(x))
        return SentimentScore(p_positive=p_pos, p_negative=1.0 - p_pos)

    def predict_many(self, xs: Sequence[SparseVector]) -> list[SentimentScore]:
        if not self.has_platt:
            raise RuntimeError("model has no Platt coefficients; fit_platt first")
        values = self.decision_values(xs)
        out = []
        for f in values:
            p = sigmoid_probability(self.platt_a, self.platt_b, float(f))
            out.append(SentimentScore(p_positive=p, p_negative=1.0 - p))
        return out

    # -- persistence ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "svm",
            "kernel": {"kind": self.kernel.kind, "sigma": self.kernel.sigma},
            "C": self.C,
            "bias": self.bias,
            "platt_a": self.platt_a,
            "platt_b": self.platt_b,
            "dimension": self.dimension,
            "dual_coefficients": self.dual_coefficients.tolist(),
            "support_vectors": [
                {"i": sv.indices.tolist(), "v": sv.values.tolist()}
                for sv in self.support_vectors
            ],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def from_dict(cls, doc: dict) -> "SvmModel":
        if not isinstance(doc, dict) or doc.get("kind") != "svm":
            raise ValueError("not an svm model document")
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError("unsupported svm model format version")
        dim = doc["dimension"]
        svs = [
            SparseVector(np.array(d["i"], dtype=np.int64), np.array(d["v"]), dim)
            for d in doc["support_vectors"]
        ]
        return cls(
            support_vectors=svs,
            dual_coefficients=np.array(doc["dual_coefficients"]),
            bias=doc["bias"],
            kernel=KernelSpec(kind=doc["kernel"]["kind"], sigma=doc["kernel"]["sigma"]),
            C=doc["C"],
            platt_a=doc["platt_a"],
            platt_b=doc["platt_b"],
        )

    @classmethod
    def load(cls, path: str | Path) -> "SvmModel":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ValueError(f"corrupt model file {path}: {exc}") from exc
        return cls.from_dict(doc)


def _to_csr(vectors: Sequence[SparseVector]) -> sp.csr_matrix:
    dim = vectors[0].dimension
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(v.indices)
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.empty(0, dtype=np.int64)
    data = np.concatenate([v.values for v in vectors]) if vectors else np.empty(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


class _KernelCache:
    """Rows of the Gram matrix, fully materialized for small problems and
    LRU-cached otherwise."""

    def __init__(self, X: sp.csr_matrix, spec: KernelSpec, max_full: int = 4000, max_rows: int = 2048):
        self.X = X
        self.spec = spec
        self.n = X.shape[0]
        self.sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
        self.full: np.ndarray | None = None
        self.rows: OrderedDict[int, np.ndarray] = OrderedDict()
        self.max_rows = max_rows
        if self.n <= max_full:
            dots = (X @ X.T).toarray()
            if spec.kind == "linear":
                self.full = dots
            else:
                sqd = self.sq[:, None] + self.sq[None, :] - 2.0 * dots
                self.full = np.exp(-np.maximum(sqd, 0.0) * spec.gamma)

    def row(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        cached = self.rows.get(i)
        if cached is not None:
            self.rows.move_to_end(i)
            return cached
        dots = np.asarray((self.X @ self.X[i].T).todense()).ravel()
        if self.spec.kind == "linear":
            row = dots
        else:
            sqd = self.sq + self.sq[i] - 2.0 * dots
            row = np.exp(-np.maximum(sqd, 0.0) * self.spec.gamma)
        if len(self.rows) >= self.max_rows:
            self.rows.popitem(last=False)
        self.rows[i] = row
        return row

    def diag(self, i: int) -> float:
        return 1.0 if self.spec.kind == "rbf" else float(self.sq[i])


class _SmoSolver:
    """Platt-style SMO with an error cache and max-|E1-E2| second-choice
    heuristic; fully deterministic for a fixed data order."""

    def __init__(self, data: LabeledDataset, kernel: KernelSpec, C: float, tol: float,
                 max_passes: int):
        self.y = np.array(data.labels, dtype=np.float64)
        self.n = len(data)
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        self.K = _KernelCache(_to_csr(list(data.vectors)), kernel)
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        # E_i = f(x_i) - y_i; all alphas start at 0, so f = b = 0
        self.errors = -self.y.copy()
        self.eps = 1e-12
        self.iterations = 0

    def solve(self) -> None:
        examine_all = True
        passes = 0
        while passes < self.max_passes:
            passes += 1
            num_changed = 0
            if examine_all:
                for i in range(self.n):
                    num_changed += self._examine(i)
            else:
                for i in range(self.n):
                    if self.eps < self.alpha[i] < self.C - self.eps:
                        num_changed += self._examine(i)
            if examine_all:
                if num_changed == 0:
                    self._finalize_bias()
                    return
                examine_all = False
            elif num_changed == 0:
                examine_all = True
        raise ConvergenceError(
            "SMO did not converge", self.iterations, self.max_kkt_violation()
        )

    def _finalize_bias(self) -> None:
        """Pin the bias from the final multipliers.  The incremental updates
        only keep b consistent with the last working pair; when no multiplier
        ends up strictly inside (0, C) that estimate can sit outside the
        feasible interval and spuriously violate the KKT conditions."""
        f_nob = self.errors + self.y - self.b
        v = self.y - f_nob  # the bias putting each point exactly on its margin
        interior = (self.alpha > self.eps) & (self.alpha < self.C - self.eps)
        if np.any(interior):
            new_b = float(np.mean(v[interior]))
        else:
            at_zero = self.alpha <= self.eps
            lower = (at_zero & (self.y > 0)) | (~at_zero & (self.y < 0))
            upper = (at_zero & (self.y < 0)) | (~at_zero & (self.y > 0))
            lo = float(np.max(v[lower])) if np.any(lower) else -math.inf
            hi = float(np.min(v[upper])) if np.any(upper) else math.inf
            if math.isinf(lo) and math.isinf(hi):
                new_b = self.b
            elif math.isinf(lo):
                new_b = hi
            elif math.isinf(hi):
                new_b = lo
            else:
                new_b = 0.5 * (lo + hi)
        self.errors += new_b - self.b
        self.b = new_b

    def _examine(self, i2: int) -> int:
        y2 = self.y[i2]
        alph2 = self.alpha[i2]
        e2 = self.errors[i2]
        r2 = e2 * y2
        if (r2 < -self.tol and alph2 < self.C - self.eps) or (r2 > self.tol and alph2 > self.eps):
            non_bound = np.flatnonzero((self.alpha > self.eps) & (self.alpha < self.C - self.eps))
            if len(non_bound) > 1:
                gaps = np.abs(self.errors[non_bound] - e2)
                i1 = int(non_bound[int(np.argmax(gaps))])
                if self._take_step(i1, i2):
                    return 1
            for i1 in non_bound:
                if self._take_step(int(i1), i2):
                    return 1
            for i1 in range(self.n):
                if self._take_step(i1, i2):
                    return 1
        return 0

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        alph1, alph2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s < 0:
            low = max(0.0, alph2 - alph1)
            high = min(self.C, self.C + alph2 - alph1)
        else:
            low = max(0.0, alph1 + alph2 - self.C)
            high = min(self.C, alph1 + alph2)
        if low >= high:
            return False
        row1 = self.K.row(i1)
        row2 = self.K.row(i2)
        k11, k12, k22 = self.K.diag(i1), row1[i2], self.K.diag(i2)
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2 = alph2 + y2 * (e1 - e2) / eta
            a2 = min(max(a2, low), high)
        else:
            # objective is linear or flat along the constraint; test the ends
            v1 = e1 + y1 - self.b - alph1 * y1 * k11 - alph2 * y2 * k12
            v2 = e2 + y2 - self.b - alph1 * y1 * k12 - alph2 * y2 * k22

            def line_obj(a2v: float) -> float:
                a1v = alph1 + s * (alph2 - a2v)
                return (0.5 * a1v * a1v * k11 + 0.5 * a2v * a2v * k22
                        + s * a1v * a2v * k12
                        + a1v * y1 * v1 + a2v * y2 * v2 - a1v - a2v)

            obj_low, obj_high = line_obj(low), line_obj(high)
            if obj_low < obj_high - self.eps:
                a2 = low
            elif obj_low > obj_high + self.eps:
                a2 = high
            else:
                a2 = alph2
        if abs(a2 - alph2) < self.eps * (a2 + alph2 + self.eps):
            return False
        a1 = alph1 + s * (alph2 - a2)
        if a1 < 0:
            a2 += s * a1
            a1 = 0.0
        elif a1 > self.C:
            a2 += s * (a1 - self.C)
            a1 = self.C
        d1 = y1 * (a1 - alph1)
        d2 = y2 * (a2 - alph2)
        b1 = self.b - e1 - d1 * k11 - d2 * k12
        b2 = self.b - e2 - d1 * k12 - d2 * k22
        if self.eps < a1 < self.C - self.eps:
            new_b = b1
        elif self.eps < a2 < self.C - self.eps:
            new_b = b2
        else:
            new_b = 0.5 * (b1 + b2)
        db = new_b - self.b
        self.alpha[i1] = a1
        self.alpha[i2] = a2
        self.b = new_b
        self.errors += d1 * row1 + d2 * row2 + db
        self.iterations += 1
        return True

    def max_kkt_violation(self) -> float:
        yf = self.y * (self.errors + self.y)  # y_i * f(x_i)
        worst = 0.0
        margin_low = np.where(self.alpha < self.C - self.eps, 1.0 - yf, 0.0)
        margin_high = np.where(self.alpha > self.eps, yf - 1.0, 0.0)
        worst = max(worst, float(np.max(margin_low)), float(np.max(margin_high)))
        return worst

    def dual_objective(self) -> float:
        ay = self.alpha * self.y
        quad = 0.0
        for i in range(self.n):
            if self.alpha[i] > 0:
                quad += ay[i] * float(np.dot(ay, self.K.row(i)))
        return float(np.sum(self.alpha) - 0.5 * quad)


def train_smo(
    data: LabeledDataset,
    kernel: KernelSpec,
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 10_000,
) -> SvmModel:
    """Solve the dual soft-margin problem; returns the model without Platt
    coefficients.  Retains only support vectors (alpha > 0)."""
    if C <= 0 or tol <= 0:
        raise ValueError("C and tol must be positive")
    if not data.has_both_classes:
        raise ValueError("training data must contain both classes")
    solver = _SmoSolver(data, kernel, C, tol, max_passes)
    solver.solve()
    keep = np.flatnonzero(solver.alpha > 1e-12)
    if abs(float(np.dot(solver.alpha, solver.y))) > ALPHA_SUM_TOL:
        raise TrainingError("equality constraint violated after training")
    model = SvmModel(
        support_vectors=[data.vectors[int(i)] for i in keep],
        dual_coefficients=(solver.alpha * solver.y)[keep],
        bias=solver.b,
        kernel=kernel,
        C=C,
    )
    return model


def dual_objective(data: LabeledDataset, kernel: KernelSpec, alpha: np.ndarray) -> float:
    """Dual objective value for arbitrary multipliers (shared with tests)."""
    K = _KernelCache(_to_csr(list(data.vectors)), kernel)
    y = np.array(data.labels, dtype=np.float64)
    ay = alpha * y
    quad = sum(ay[i] * float(np.dot(ay, K.row(i))) for i in range(len(data)))
    return float(np.sum(alpha) - 0.5 * quad)


# -- Platt scaling -----------------------------------------------------


def sigmoid_probability(a: float, b: float, decision_value: float) -> float:
    """P(positive | f) = 1 / (1 + exp(a*f + b)), computed overflow-safe."""
    z = a * decision_value + b
    if z >= 0:
        e = math.exp(-z)
        p = e / (1.0 + e)
    else:
        p = 1.0 / (1.0 + math.exp(z))
    # keep strictly inside (0, 1) even when the sigmoid saturates;
    # 1 - 2^-53 is the largest double below 1, so p + (1 - p) == 1 exactly
    return min(max(p, 2.0 ** -53), 1.0 - 2.0 ** -53)


def _smoothed_targets(labels: np.ndarray) -> np.ndarray:
    n_pos = int(np.sum(labels > 0))
    n_neg = len(labels) - n_pos
    return np.where(labels > 0, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))


def platt_nll(a: float, b: float, decision_values: Sequence[float], labels: Sequence[int]) -> float:
    """Negative log-likelihood of the sigmoid against smoothed targets.

    With p = 1/(1+exp(z)) and z = a*f + b, each sample contributes
    -[t*log(p) + (1-t)*log(1-p)] = t*z + log(1+exp(-z)).
    """
    f = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(labels)
    t = _smoothed_targets(y)
    z = a * f + b
    return float(np.sum(t * z + np.logaddexp(0.0, -z)))


def fit_platt(decision_values: Sequence[float], labels: Sequence[int]) -> tuple[float, float]:
    """Maximum-likelihood sigmoid fit with smoothed targets, by Newton's
    method with backtracking (Lin, Lu & Weng's robust formulation)."""
    f = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(labels)
    if len(f) != len(y) or len(f) == 0:
        raise ValueError("decision_values and labels must be equal-length and non-empty")
    n_pos = int(np.sum(y > 0))
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes required to fit Platt scaling")
    if float(np.ptp(f)) == 0.0:
        raise ValueError("degenerate decision values: all identical")

    t = _smoothed_targets(y)
    a = 0.0
    b = math.log((n_neg + 1.0) / (n_pos + 1.0))
    min_step = 1e-10
    sigma_reg = 1e-12

    def objective(a_, b_):
        z = a_ * f + b_
        return float(np.sum(t * z + np.logaddexp(0.0, -z)))

    fval = objective(a, b)
    for _ in range(200):
        z = a * f + b
        p = expit(-z)  # P(positive) = 1/(1+exp(z))
        d1 = t - p  # dNLL/dz per sample
        g_a = float(np.dot(f, d1))
        g_b = float(np.sum(d1))
        if abs(g_a) < 1e-8 and abs(g_b) < 1e-8:
            break
        w = p * (1.0 - p)
        h11 = float(np.dot(f * f, w)) + sigma_reg
        h22 = float(np.sum(w)) + sigma_reg
        h12 = float(np.dot(f, w))
        det = h11 * h22 - h12 * h12
        da = -(h22 * g_a - h12 * g_b) / det
        db = -(h11 * g_b - h12 * g_a) / det
        gd = g_a * da + g_b * db
        step = 1.0
        while step >= min_step:
            new_a, new_b = a + step * da, b + step * db
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * step * gd:
                a, b, fval = new_a, new_b, new_f
                break
            step /= 2.0
        else:
            break
    return a, b


# -- evaluation --------------------------------------------------------


@dataclass(frozen=True)
class Metrics:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else 0.0

    @property
    def precision(self) -> float:
        denom = self.tp + self.fp
        return self.tp / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.tp + self.fn
        return self.tp / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if (p + r) else 0.0

    @property
    def confusion_matrix(self) -> list[list[int]]:
        """[[tn, fp], [fn, tp]]: rows true class, columns predicted."""
        return [[self.tn, self.fp], [self.fn, self.tp]]


def evaluate(model: SvmModel, test: LabeledDataset) -> Metrics:
    if len(test) == 0:
        raise ValueError("test set must be non-empty")
    scores = model.predict_many(list(test.vectors))
    tp = tn = fp = fn = 0
    for score, y in zip(scores, test.labels):
        predicted_positive = score.label == "positive"
        if y > 0:
            tp += predicted_positive
            fn += not predicted_positive
        else:
            fp += predicted_positive
            tn += not predicted_positive
    return Metrics(tp=tp, tn=tn, fp=fp, fn=fn)


def save_model(model: SvmModel, path: str | Path) -> None:
    model.save(path)


def load_model(path: str | Path) -> SvmModel:
    return SvmModel.load(path)
