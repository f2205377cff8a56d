"""Bag-of-words victim classifiers behind a black-box prediction interface.

Everything outside this module sees only ``TextClassifier``: a document goes
in, a probability vector comes out. Weights never leave.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Document, LabeledDataset
from .errors import FormatError, TrainingError

_FORMAT = "bow-logistic"
_VERSION = 1


class TextClassifier:
    """Black-box text classifier interface.

    Subclasses implement ``predict_proba`` returning a probability vector of
    length ``num_labels`` that sums to 1. ``predict_proba_batch`` may be
    overridden for speed; results must match the per-document path.
    """

    @property
    def num_labels(self) -> int:
        raise NotImplementedError

    def predict_proba(self, doc: Document) -> np.ndarray:
        raise NotImplementedError

    def predict_proba_batch(self, docs) -> np.ndarray:
        return np.stack([self.predict_proba(d) for d in docs])


@dataclass
class BowLogisticModel(TextClassifier):
    """Multinomial logistic regression over binary token-presence features."""

    vocabulary: dict[str, int]
    weights: np.ndarray  # (num_labels, vocab_size)
    bias: np.ndarray  # (num_labels,)
    label_names: list[str] = field(default_factory=list)
    l2_penalty: float = 0.0

    @property
    def num_labels(self) -> int:
        return int(self.weights.shape[0])

    def _presence(self, doc: Document) -> np.ndarray:
        x = np.zeros(len(self.vocabulary))
        for t in set(doc.tokens):
            j = self.vocabulary.get(t)
            if j is not None:
                x[j] = 1.0
        return x

    def predict_proba(self, doc: Document) -> np.ndarray:
        logits = self.weights @ self._presence(doc) + self.bias
        return _softmax(logits[None, :])[0]

    def predict_proba_batch(self, docs) -> np.ndarray:
        X = np.stack([self._presence(d) for d in docs])
        return _softmax(X @ self.weights.T + self.bias)


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train_bow_logistic(
    dataset: LabeledDataset,
    l2_penalty: float = 1e-3,
    max_epochs: int = 300,
    seed: int = 0,
    learning_rate: float = 0.1,
) -> BowLogisticModel:
    """Fit the victim by full-batch gradient descent from zero init.

    Deterministic: zero initialization and full batches make ``seed`` inert;
    it is accepted for interface stability. Training loss must be
    non-increasing; an increase beyond tolerance raises TrainingError naming
    the epoch.
    """
    train = dataset.train()
    if not train:
        raise TrainingError("training split is empty")
    if dataset.num_labels < 2:
        raise TrainingError("need at least 2 labels to train")
    if l2_penalty < 0:
        raise TrainingError("l2_penalty must be >= 0")

    vocab_tokens = sorted({t for doc, _ in train for t in doc.tokens})
    vocabulary = {t: j for j, t in enumerate(vocab_tokens)}
    V, L, N = len(vocabulary), dataset.num_labels, len(train)

    X = np.zeros((N, V))
    y = np.zeros(N, dtype=int)
    for i, (doc, label) in enumerate(train):
        y[i] = label
        for t in set(doc.tokens):
            X[i, vocabulary[t]] = 1.0
    Y = np.zeros((N, L))
    Y[np.arange(N), y] = 1.0

    W = np.zeros((L, V))
    b = np.zeros(L)
    prev_loss = np.inf
    for epoch in range(max_epochs):
        P = _softmax(X @ W.T + b)
        loss = -np.mean(np.log(np.clip(P[np.arange(N), y], 1e-12, None)))
        loss += 0.5 * l2_penalty * float(np.sum(W * W))
        if loss > prev_loss + 1e-9:
            raise TrainingError(
                f"loss increased at epoch {epoch} ({prev_loss:.6f} -> {loss:.6f}); "
                "lower the learning rate"
            )
        prev_loss = loss
        G = P - Y
        W -= learning_rate * (G.T @ X / N + l2_penalty * W)
        b -= learning_rate * G.mean(axis=0)

    return BowLogisticModel(
        vocabulary=vocabulary,
        weights=W,
        bias=b,
        label_names=list(dataset.label_names),
        l2_penalty=l2_penalty,
    )


def save_model(model: BowLogisticModel, path) -> None:
    tokens = [None] * len(model.vocabulary)
    for t, j in model.vocabulary.items():
        tokens[j] = t
    payload = {
        "format": _FORMAT,
        "version": _VERSION,
        "label_names": model.label_names,
        "vocabulary": tokens,
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "l2_penalty": model.l2_penalty,
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path) -> BowLogisticModel:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"model file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"model file {path} is malformed at offset {e.pos}: {e.msg}")
    if not isinstance(payload, dict) or payload.get("format") != _FORMAT:
        raise FormatError(f"model file {path} has unrecognized format")
    if payload.get("version") != _VERSION:
        raise FormatError(
            f"model file {path} has format version {payload.get('version')} "
            f"(expected {_VERSION})"
        )
    for key in ("label_names", "vocabulary", "weights", "bias"):
        if key not in payload:
            raise FormatError(f"model file {path} is missing key {key!r}")
    weights = np.array(payload["weights"], dtype=float)
    bias = np.array(payload["bias"], dtype=float)
    vocabulary = {t: j for j, t in enumerate(payload["vocabulary"])}
    if weights.ndim != 2 or weights.shape != (len(bias), len(vocabulary)):
        raise FormatError(f"model file {path} has inconsistent weight shapes")
    return BowLogisticModel(
        vocabulary=vocabulary,
        weights=weights,
        bias=bias,
        label_names=list(payload["label_names"]),
        l2_penalty=float(payload.get("l2_penalty", 0.0)),
    )
