"""Trainable linear multiclass recognizer over symbol labels.

One-vs-rest max-margin linear models trained in-repo with deterministic
full-batch subgradient descent on the L2-regularized hinge loss; the
regularization constant is chosen by stratified k-fold cross-validation
over a grid. Prediction returns top-k candidates with softmax-over-margin
confidences. Two models are used at recognition time: one for base
symbols, one trained on ottu symbols only.
"""

from __future__ import annotations

import zipfile
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CorruptModel,
    DimensionMismatch,
    InsufficientSamples,
    SingleLabel,
    VersionMismatch,
)

MODEL_FORMAT_VERSION = 1
DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0)


@dataclass(frozen=True)
class TrainingConfig:
    c_grid: tuple[float, ...] = DEFAULT_C_GRID
    folds: int = 5
    seed: int = 0
    epochs: int = 120

    def __post_init__(self) -> None:
        if self.folds < 2:
            raise ValueError("cross-validation needs at least 2 folds")
        if not self.c_grid or any(c <= 0 for c in self.c_grid):
            raise ValueError("C grid must be non-empty and positive")


@dataclass(frozen=True)
class Candidate:
    label: int
    confidence: float


@dataclass
class LinearModel:
    labels: list[int]            # label ids, row order of the weight matrix
    weights: np.ndarray          # labels x dim
    bias: np.ndarray             # labels
    c_value: float               # regularization constant the model was trained with
    cv_accuracy: float = 1.0     # mean CV accuracy of the chosen C
    label_index: dict[int, int] = field(init=False)

    def __post_init__(self) -> None:
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def _margins(weights: np.ndarray, bias: np.ndarray, x: np.ndarray) -> np.ndarray:
    return weights @ x + bias


def _fit_ovr(x: np.ndarray, y_index: np.ndarray, n_labels: int,
             c_value: float, epochs: int) -> tuple[np.ndarray, np.ndarray]:
    """All one-vs-rest problems at once: full-batch subgradient descent on
    (1/2)||w||^2 + C * sum hinge, with averaged iterates. Deterministic."""
    n, d = x.shape
    y = -np.ones((n, n_labels), dtype=np.float64)
    y[np.arange(n), y_index] = 1.0
    w = np.zeros((n_labels, d), dtype=np.float64)
    b = np.zeros(n_labels, dtype=np.float64)
    w_sum = np.zeros_like(w)
    b_sum = np.zeros_like(b)
    lam = 1.0 / (c_value * n)
    avg_from = max(1, epochs // 2)
    for t in range(1, epochs + 1):
        eta = 1.0 / (lam * (t + 1))
        margins = (x @ w.T + b) * y
        viol = (margins < 1.0).astype(np.float64) * y
        grad_w = lam * w - (viol.T @ x) / n
        grad_b = -viol.sum(axis=0) / n
        w -= eta * grad_w
        b -= eta * grad_b
        if t >= avg_from:
            w_sum += w
            b_sum += b
    count = epochs - avg_from + 1
    return w_sum / count, b_sum / count


def _stratified_folds(y_index: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Per-sample fold assignment, round-robin within each label."""
    rng = np.random.default_rng(seed)
    assign = np.zeros(len(y_index), dtype=np.int64)
    for lab in np.unique(y_index):
        idx = np.flatnonzero(y_index == lab)
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = np.arange(len(idx)) % folds
    return assign


def train(samples: list[tuple[np.ndarray, int]],
          config: TrainingConfig | None = None) -> LinearModel:
    """Train a one-vs-rest linear model with CV-selected regularization."""
    config = config or TrainingConfig()
    if not samples:
        raise InsufficientSamples("no training samples")
    labels = sorted({lab for _, lab in samples})
    if len(labels) < 2:
        raise SingleLabel("training needs at least 2 distinct labels")
    index = {lab: i for i, lab in enumerate(labels)}
    x = np.asarray([np.asarray(vec, dtype=np.float64) for vec, _ in samples])
    y_index = np.asarray([index[lab] for _, lab in samples], dtype=np.int64)
    counts = np.bincount(y_index, minlength=len(labels))
    if counts.min() < 2:
        short = labels[int(np.argmin(counts))]
        raise InsufficientSamples(f"label {short} has {counts.min()} sample(s); need >= 2")

    folds = _stratified_folds(y_index, config.folds, config.seed)
    best_c = None
    best_acc = -1.0
    for c_value in config.c_grid:
        correct = 0
        total = 0
        for k in range(config.folds):
            train_mask = folds != k
            val_mask = ~train_mask
            if not val_mask.any() or not train_mask.any():
                continue
            w, b = _fit_ovr(x[train_mask], y_index[train_mask], len(labels),
                            c_value, config.epochs)
            pred = np.argmax(x[val_mask] @ w.T + b, axis=1)
            correct += int((pred == y_index[val_mask]).sum())
            total += int(val_mask.sum())
        acc = correct / total if total else 0.0
        if acc > best_acc:  # ties keep the earlier (smaller) C
            best_acc = acc
            best_c = c_value

    w, b = _fit_ovr(x, y_index, len(labels), best_c, config.epochs)
    return LinearModel(labels=labels, weights=w, bias=b,
                       c_value=float(best_c), cv_accuracy=best_acc)


def predict_topk(model: LinearModel, features: np.ndarray, k: int) -> list[Candidate]:
    """Top-k candidates by softmax-over-margin confidence, ties by label id."""
    vec = np.asarray(features, dtype=np.float64).ravel()
    if vec.shape[0] != model.dim:
        raise DimensionMismatch(f"feature length {vec.shape[0]} != model dim {model.dim}")
    if not 1 <= k <= len(model.labels):
        raise ValueError(f"k must be in [1, {len(model.labels)}]")
    margins = _margins(model.weights, model.bias, vec)
    shifted = margins - margins.max()
    probs = np.exp(shifted)
    probs /= probs.sum()
    order = sorted(range(len(model.labels)), key=lambda i: (-probs[i], model.labels[i]))
    return [Candidate(label=model.labels[i], confidence=float(probs[i])) for i in order[:k]]


def classify_symbol(is_ottu: bool, features: np.ndarray,
                    base_model: LinearModel, ottu_model: LinearModel,
                    k: int, geometric_label: int | None = None) -> list[Candidate]:
    """Dispatch a symbol to the right model; geometric punctuation bypasses."""
    if geometric_label is not None:
        return [Candidate(label=geometric_label, confidence=1.0)]
    model = ottu_model if is_ottu else base_model
    return predict_topk(model, features, min(k, len(model.labels)))


def save_model(model: LinearModel, path) -> None:
    """Versioned binary dump; weights round-trip bit-exact."""
    with open(path, "wb") as fh:
        np.savez(fh,
                 format_version=np.int64(MODEL_FORMAT_VERSION),
                 labels=np.asarray(model.labels, dtype=np.int64),
                 weights=model.weights.astype(np.float64),
                 bias=model.bias.astype(np.float64),
                 c_value=np.float64(model.c_value),
                 cv_accuracy=np.float64(model.cv_accuracy))


def load_model(path) -> LinearModel:
    try:
        with np.load(path) as data:
            version = int(data["format_version"])
            if version != MODEL_FORMAT_VERSION:
                raise VersionMismatch(f"model format v{version}; this build reads v{MODEL_FORMAT_VERSION}")
            labels = [int(v) for v in data["labels"]]
            weights = np.asarray(data["weights"], dtype=np.float64)
            bias = np.asarray(data["bias"], dtype=np.float64)
            c_value = float(data["c_value"])
            cv_accuracy = float(data["cv_accuracy"])
    except VersionMismatch:
        raise
    except (OSError, zipfile.BadZipFile, KeyError, ValueError) as exc:
        raise CorruptModel(f"cannot read model file {path}: {exc}") from exc
    if weights.ndim != 2 or weights.shape[0] != len(labels) or bias.shape != (len(labels),):
        raise CorruptModel(f"model file {path} has inconsistent shapes")
    return LinearModel(labels=labels, weights=weights, bias=bias,
                       c_value=c_value, cv_accuracy=cv_accuracy)
