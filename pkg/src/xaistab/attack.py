"""Greedy word-substitution attacks against explanation rankings.

The main attack walks candidate positions in order of deletion-probed word
importance and, at each position, commits the embedding-neighbor substitution
that most reduces rank agreement with the base explanation while keeping the
predicted label, staying semantically close to the original document, and
never touching the words the base explanation ranked on top. The baselines
(random, center-of-mass, L2 displacement) reuse the same loop and the same
admission constraints and differ only in how a candidate is chosen.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Document, StopwordSet, tokenize, unique_features
from .embed import (
    EmbeddingStore,
    nearest_neighbors,
    pos_compatible,
    semantic_similarity,
)
from .errors import ParameterError
from .explainer import Explanation, SamplingConfig, explain, inherency_probe, top_k
from .model import TextClassifier
from .ranksim import center_of_mass, lp_distance, metrics_abs_rc_ins, rbo

__all__ = [
    "AttackConfig",
    "AttackResult",
    "SearchOrder",
    "Substitution",
    "PRESETS",
    "STRATEGIES",
    "budget",
    "order_words",
    "xaifooler_attack",
    "baseline_attack",
    "inherency_probe",
]

STRATEGIES = ("xaifooler", "random", "lom", "lp")


@dataclass(frozen=True)
class AttackConfig:
    """Search constraints shared by the main attack and the baselines."""

    k: int = 5
    delta: float = 0.80
    epsilon: float = 0.1
    min_budget: int = 3
    rbo_p: float = 0.75
    max_candidates: int = 50
    min_cosine: float = 0.5
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    require_topk_demotion: bool = False
    ascending: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.delta <= 1.0:
            raise ParameterError(f"delta must be in (0, 1], got {self.delta}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ParameterError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.min_budget < 1:
            raise ParameterError(f"min_budget must be >= 1, got {self.min_budget}")
        if not 0.0 < self.rbo_p < 1.0:
            raise ParameterError(f"rbo_p must be in (0, 1), got {self.rbo_p}")


PRESETS = {
    "default": AttackConfig(),
    "wide_budget": AttackConfig(epsilon=0.2),
    "strict": AttackConfig(require_topk_demotion=True),
}


@dataclass(frozen=True)
class SearchOrder:
    """Token positions eligible for substitution, most impactful first."""

    positions: tuple[int, ...]


@dataclass(frozen=True)
class Substitution:
    position: int
    old: str
    new: str
    score: float  # objective value right after committing this swap


@dataclass
class AttackResult:
    strategy: str
    status: str  # succeeded | no_improvement | budget_exhausted
    base_doc: Document
    pert_doc: Document
    base_expl: Explanation
    pert_expl: Explanation
    similarity: float  # rank agreement (extrapolated RBO) of final vs base
    metrics: tuple  # (ABS, RC, INS, SIM) with SIM the document similarity
    substitutions: tuple[Substitution, ...]
    constraint_audit: dict[str, bool]
    accepted_scores: tuple[float, ...]
    search_stats: dict[str, int] = field(default_factory=dict)

    @property
    def doc_id(self) -> str:
        return self.base_doc.id

    @property
    def num_substitutions(self) -> int:
        return len(self.substitutions)


def budget(num_features: int, config: AttackConfig) -> int:
    """Substitution budget: an epsilon fraction of features, floored."""
    return int(math.ceil(max(config.epsilon * num_features, config.min_budget)))


def order_words(
    f: TextClassifier,
    doc: Document,
    base_expl: Explanation,
    k: int,
    stopwords: StopwordSet,
    ascending: bool = False,
) -> SearchOrder:
    """Rank candidate positions by deletion impact on the winning class.

    Impact of a word is |P(label | doc) - P(label | doc without any occurrence
    of it)|. Stopword positions and every position holding one of the top-k
    explanation features are excluded. Ties break toward the earlier position,
    so a constant classifier degrades to plain document order.
    """
    protected = set(base_expl.features[:k])
    base = np.asarray(f.predict_proba(doc), dtype=float)
    label = int(np.argmax(base))

    words = []
    seen = set()
    for t in doc.tokens:
        if t in stopwords or t in protected or t in seen:
            continue
        seen.add(t)
        words.append(t)
    if not words:
        return SearchOrder(positions=())

    stripped = []
    for w in words:
        tokens = tuple(t for t in doc.tokens if t != w)
        stripped.append(
            Document(id=f"{doc.id}#del:{w}", raw=" ".join(tokens), tokens=tokens)
        )
    P = np.asarray(f.predict_proba_batch(stripped), dtype=float)
    impact = {w: abs(float(base[label]) - float(P[i, label])) for i, w in enumerate(words)}

    positions = [
        i
        for i, t in enumerate(doc.tokens)
        if t not in stopwords and t not in protected
    ]
    sign = 1.0 if ascending else -1.0
    positions.sort(key=lambda i: (sign * impact[doc.tokens[i]], i))
    return SearchOrder(positions=tuple(positions))


def _replace_at(doc: Document, position: int, word: str) -> Document:
    tokens = doc.tokens[:position] + (word,) + doc.tokens[position + 1 :]
    return Document(id=doc.id, raw=" ".join(tokens), tokens=tokens)


def _run_greedy(
    f: TextClassifier,
    doc: Document,
    store: EmbeddingStore,
    config: AttackConfig,
    stopwords: StopwordSet | None,
    pos_lexicon,
    strategy: str,
    seed: int,
) -> AttackResult:
    stopwords = stopwords if stopwords is not None else StopwordSet.default()
    sampling = config.sampling
    base = explain(f, doc, sampling, stopwords=stopwords)
    base_ranked = base.ranked()
    base_len = max(len(base.features), 1)
    protected = {feat for feat, _ in top_k(base, config.k)}
    label = base.label

    max_subs = budget(len(unique_features(doc, stopwords)), config)
    order = order_words(
        f, doc, base, config.k, stopwords, ascending=config.ascending
    ).positions

    rng = np.random.default_rng(seed) if strategy == "random" else None
    if strategy == "random":
        # no guidance at all: visit positions in a seeded uniform order
        order = tuple(np.asarray(order)[rng.permutation(len(order))]) if order else ()

    stats = {
        "positions_visited": 0,
        "candidates_considered": 0,
        "rejected_not_normal_form": 0,
        "rejected_pos_tag": 0,
        "rejected_label_flip": 0,
        "rejected_similarity": 0,
        "rejected_topk_missing": 0,
        "rejected_no_improvement": 0,
        "accepted": 0,
    }

    def objective(expl: Explanation) -> float:
        r = expl.ranked()
        if strategy in ("xaifooler", "random"):
            return rbo(base_ranked, r, config.rbo_p)
        if strategy == "lom":
            com_b = center_of_mass(base_ranked)
            com_c = center_of_mass(r)
            if com_b is None or com_c is None:
                return 0.0
            return abs(com_b - com_c) / base_len
        return lp_distance(base_ranked, r, p=2.0)

    best = objective(base)
    current = doc
    subs: list[Substitution] = []

    for position in order:
        if len(subs) >= max_subs:
            break
        position = int(position)
        word = current.tokens[position]
        cands = nearest_neighbors(
            store, word, max_candidates=config.max_candidates,
            min_cosine=config.min_cosine,
        ).candidates
        if not cands:
            continue
        stats["positions_visited"] += 1

        passing = []  # (candidate word, doc, explanation, objective)
        for cand, _cos in cands:
            stats["candidates_considered"] += 1
            if tokenize(cand) != [cand]:
                stats["rejected_not_normal_form"] += 1
                continue
            if not pos_compatible(pos_lexicon, word, cand):
                stats["rejected_pos_tag"] += 1
                continue
            cand_doc = _replace_at(current, position, cand)
            probs = np.asarray(f.predict_proba(cand_doc), dtype=float)
            if int(np.argmax(probs)) != label:
                stats["rejected_label_flip"] += 1
                continue
            if semantic_similarity(store, doc, cand_doc) < config.delta:
                stats["rejected_similarity"] += 1
                continue
            cand_expl = explain(f, cand_doc, sampling, stopwords=stopwords)
            if not protected <= set(cand_expl.features):
                stats["rejected_topk_missing"] += 1
                continue
            passing.append((cand, cand_doc, cand_expl, objective(cand_expl)))

        if not passing:
            continue

        if strategy == "random":
            cand, cand_doc, cand_expl, score = passing[
                int(rng.integers(len(passing)))
            ]
        elif strategy == "xaifooler":
            cand, cand_doc, cand_expl, score = min(
                passing, key=lambda item: (item[3], item[0])
            )
            if score >= best:
                stats["rejected_no_improvement"] += len(passing)
                continue
        else:  # lom / lp want their displacement to grow strictly
            cand, cand_doc, cand_expl, score = max(
                passing, key=lambda item: (item[3], item[0])
            )
            if score <= best:
                stats["rejected_no_improvement"] += len(passing)
                continue

        stats["accepted"] += 1
        subs.append(Substitution(position=position, old=word, new=cand, score=score))
        best = score
        current = cand_doc

    pert_expl = explain(f, current, sampling, stopwords=stopwords) if subs else base

    demotion_ok = True
    if config.require_topk_demotion and subs:
        base_rank = {feat: i for i, feat in enumerate(base.features)}
        pert_rank = {feat: i for i, feat in enumerate(pert_expl.features)}
        demotion_ok = any(
            pert_rank.get(feat, len(pert_rank)) > base_rank[feat]
            for feat in protected
        )
        if not demotion_ok:
            # the gate demands at least one protected word lose rank;
            # otherwise the attack does not count and the document reverts
            current = doc
            pert_expl = base
            subs = []

    if not subs:
        status = "no_improvement"
    elif len(subs) >= max_subs:
        status = "budget_exhausted"
    else:
        status = "succeeded"

    final_probs = np.asarray(f.predict_proba(current), dtype=float)
    sim_doc = semantic_similarity(store, doc, current)
    abs_change, rc, ins = metrics_abs_rc_ins(
        base_ranked, pert_expl.ranked(), config.k
    )
    audit = {
        "prediction_preserved": int(np.argmax(final_probs)) == label,
        "semantic_threshold": sim_doc >= config.delta,
        "budget_respected": len(subs) <= max_subs,
        "topk_present": protected <= set(pert_expl.features),
    }
    if config.require_topk_demotion:
        audit["topk_demoted"] = demotion_ok and bool(subs)

    return AttackResult(
        strategy=strategy,
        status=status,
        base_doc=doc,
        pert_doc=current,
        base_expl=base,
        pert_expl=pert_expl,
        similarity=rbo(base_ranked, pert_expl.ranked(), config.rbo_p),
        metrics=(abs_change, rc, ins, sim_doc),
        substitutions=tuple(subs),
        constraint_audit=audit,
        accepted_scores=tuple(s.score for s in subs),
        search_stats=stats,
    )


def xaifooler_attack(
    f: TextClassifier,
    doc: Document,
    store: EmbeddingStore,
    config: AttackConfig | None = None,
    stopwords: StopwordSet | None = None,
    pos_lexicon=None,
) -> AttackResult:
    """Minimize rank agreement between the base and perturbed explanations."""
    config = config if config is not None else AttackConfig()
    return _run_greedy(
        f, doc, store, config, stopwords, pos_lexicon,
        strategy="xaifooler", seed=0,
    )


def baseline_attack(
    f: TextClassifier,
    doc: Document,
    store: EmbeddingStore,
    strategy: str,
    config: AttackConfig | None = None,
    stopwords: StopwordSet | None = None,
    pos_lexicon=None,
    seed: int = 0,
) -> AttackResult:
    """Run one of the comparison strategies under the same constraints.

    random substitutes admissible candidates at seeded-uniform positions,
    lom greedily displaces the explanation's center of mass, lp greedily
    grows the L2 gap between weight vectors.
    """
    if strategy not in ("random", "lom", "lp"):
        raise ParameterError(
            f"strategy must be one of random, lom, lp; got {strategy!r}"
        )
    config = config if config is not None else AttackConfig()
    return _run_greedy(
        f, doc, store, config, stopwords, pos_lexicon,
        strategy=strategy, seed=seed,
    )
