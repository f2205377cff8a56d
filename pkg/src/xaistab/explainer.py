"""Local surrogate explanations via word-deletion sampling.

The pipeline: sample binary masks over the document's unique features, build
the matching word-deleted documents, query the black-box classifier, weight
each sample by an exponential kernel on cosine proximity to the original,
fit a ridge-regularized weighted linear surrogate on the predicted
probability of the winning class, and rank features by absolute coefficient.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .corpus import Document, StopwordSet, unique_features
from .errors import InterfaceError, ParameterError
from .model import TextClassifier
from .ranksim import RankedList, metrics_abs_rc_ins, rbo

_EXHAUSTIVE_FEATURE_CAP = 16


@dataclass(frozen=True)
class SamplingConfig:
    """Knobs of the explanation sampler and surrogate."""

    n: int = 1000
    kernel_width: float = 25.0
    surrogate_l2: float = 1.0
    seed: int = 0
    exhaustive: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if self.kernel_width <= 0:
            raise ParameterError(f"kernel_width must be > 0, got {self.kernel_width}")
        if self.surrogate_l2 <= 0:
            raise ParameterError(
                f"surrogate_l2 must be > 0, got {self.surrogate_l2}"
            )


@dataclass(frozen=True)
class Explanation:
    """Ranked feature attribution for one document and one class."""

    label: int
    n: int
    seed: int
    entries: tuple[tuple[str, float], ...]

    @property
    def features(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.entries)

    def ranked(self) -> RankedList:
        return RankedList(items=self.entries)

    def to_json(self) -> str:
        return json.dumps(
            {
                "label": self.label,
                "n": self.n,
                "seed": self.seed,
                "features": [{"token": f, "weight": w} for f, w in self.entries],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Explanation":
        payload = json.loads(text)
        return cls(
            label=int(payload["label"]),
            n=int(payload["n"]),
            seed=int(payload["seed"]),
            entries=tuple(
                (e["token"], float(e["weight"])) for e in payload["features"]
            ),
        )


@dataclass
class MaskSample:
    """Masks over a fixed feature order plus the matching deleted documents.

    Row 0 is always the all-ones mask (the unperturbed document).
    """

    features: list[str]
    masks: np.ndarray  # (samples, num_features) in {0, 1}
    documents: list[Document]


def sample_perturbations(
    doc: Document,
    n: int,
    seed: int,
    stopwords: StopwordSet | None = None,
    exhaustive: bool = False,
) -> MaskSample:
    """Draw n random deletion masks (plus the all-ones original as sample 0).

    Each random mask removes k ~ uniform{1..U-1} distinct features, chosen
    uniformly without replacement; every occurrence of a removed feature is
    deleted. With ``exhaustive`` the full mask space (every proper non-empty
    kept subset) is enumerated instead and ``n`` is ignored.
    """
    stopwords = stopwords if stopwords is not None else StopwordSet.default()
    features = unique_features(doc, stopwords)
    U = len(features)
    if U < 2:
        raise ParameterError(
            f"document {doc.id} has {U} unique features; need >= 2 to sample masks"
        )

    if exhaustive:
        if U > _EXHAUSTIVE_FEATURE_CAP:
            raise ParameterError(
                f"exhaustive sampling needs <= {_EXHAUSTIVE_FEATURE_CAP} features, "
                f"document {doc.id} has {U}"
            )
        kept_codes = [(1 << U) - 1] + list(range((1 << U) - 2, 0, -1))
        masks = np.array(
            [[(code >> j) & 1 for j in range(U)] for code in kept_codes],
            dtype=float,
        )
    else:
        rng = np.random.default_rng(seed)
        masks = np.ones((n + 1, U))
        for i in range(1, n + 1):
            k = int(rng.integers(1, U))
            removed = rng.choice(U, size=k, replace=False)
            masks[i, removed] = 0.0

    documents = []
    for i, row in enumerate(masks):
        removed_feats = {features[j] for j in range(U) if row[j] == 0.0}
        if removed_feats:
            tokens = tuple(t for t in doc.tokens if t not in removed_feats)
        else:
            tokens = doc.tokens
        documents.append(
            Document(id=f"{doc.id}#s{i}", raw=" ".join(tokens), tokens=tokens)
        )
    return MaskSample(features=features, masks=masks, documents=documents)


def _validate_probs(P: np.ndarray, num_labels: int) -> None:
    if P.ndim == 1:
        P = P[None, :]
    if P.shape[1] != num_labels:
        raise InterfaceError(
            f"classifier returned {P.shape[1]} probabilities, expected {num_labels}"
        )
    if np.any(P < -1e-9) or np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-6:
        raise InterfaceError("classifier probabilities are not normalized")


def _weighted_ridge(X, y, sample_weight, l2):
    """Weighted least squares with an L2 penalty on the coefficients.

    The intercept is handled by weighted centering and left unpenalized.
    """
    w = sample_weight / sample_weight.sum()
    mx = w @ X
    my = float(w @ y)
    Xc = X - mx
    yc = y - my
    WXc = Xc * sample_weight[:, None]
    A = Xc.T @ WXc + l2 * np.eye(X.shape[1])
    beta = np.linalg.solve(A, WXc.T @ yc)
    return beta


def explain(
    f: TextClassifier,
    doc: Document,
    config: SamplingConfig,
    stopwords: StopwordSet | None = None,
) -> Explanation:
    """Explain f's winning class on doc; returns all features ranked.

    Ranking is by absolute surrogate coefficient, ties broken
    lexicographically so equal-weight features have a stable order.
    """
    stopwords = stopwords if stopwords is not None else StopwordSet.default()
    base = np.asarray(f.predict_proba(doc), dtype=float)
    _validate_probs(base, f.num_labels)
    label = int(np.argmax(base))

    features = unique_features(doc, stopwords)
    if not features:
        raise ParameterError(f"document {doc.id} has no explainable features")
    if len(features) == 1:
        # single feature: weight is the direct probability drop on removal
        feat = features[0]
        tokens = tuple(t for t in doc.tokens if t != feat)
        stripped = Document(id=f"{doc.id}#s1", raw=" ".join(tokens), tokens=tokens)
        probs = np.asarray(f.predict_proba(stripped), dtype=float)
        _validate_probs(probs, f.num_labels)
        weight = float(base[label] - probs[label])
        return Explanation(
            label=label, n=1, seed=config.seed, entries=((feat, weight),)
        )

    sample = sample_perturbations(
        doc, config.n, config.seed, stopwords=stopwords, exhaustive=config.exhaustive
    )
    P = np.asarray(f.predict_proba_batch(sample.documents), dtype=float)
    _validate_probs(P, f.num_labels)
    y = P[:, label]

    U = len(sample.features)
    kept = sample.masks.sum(axis=1)
    proximity = np.sqrt(kept / U)  # cosine of a binary mask to all-ones
    weights = np.exp(-((1.0 - proximity) ** 2) / config.kernel_width**2)

    coefs = _weighted_ridge(sample.masks, y, weights, config.surrogate_l2)
    order = sorted(zip(sample.features, coefs), key=lambda fw: (-abs(fw[1]), fw[0]))
    return Explanation(
        label=label,
        n=len(sample.documents) - 1,
        seed=config.seed,
        entries=tuple((feat, float(w)) for feat, w in order),
    )


def top_k(explanation: Explanation, k: int) -> list[tuple[str, float]]:
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return list(explanation.entries[:k])


def inherency_probe(
    f: TextClassifier,
    doc: Document,
    config: SamplingConfig,
    trials: int,
    k: int = 5,
    rbo_p: float = 0.75,
    seeds=None,
    stopwords: StopwordSet | None = None,
):
    """Re-explain the unchanged document under varied seeds.

    Returns one (abs, rc, ins, rbo) tuple per trial beyond the first, each
    measured against the first trial's explanation. This is the attack-free
    noise floor of the explainer itself.
    """
    if trials < 2:
        raise ParameterError(f"trials must be >= 2, got {trials}")
    if seeds is None:
        seeds = [config.seed + t for t in range(trials)]
    if len(seeds) != trials:
        raise ParameterError("seeds, when given, must have one entry per trial")
    explanations = [
        explain(f, doc, replace(config, seed=s), stopwords=stopwords) for s in seeds
    ]
    first = explanations[0].ranked()
    out = []
    for e in explanations[1:]:
        r = e.ranked()
        abs_change, rc, ins = metrics_abs_rc_ins(first, r, k)
        out.append((abs_change, rc, ins, rbo(first, r, rbo_p)))
    return out
