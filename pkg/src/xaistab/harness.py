"""Experiment orchestration: stability sweeps, attack campaigns, reports.

Per-unit seeds are derived by hashing (global seed, doc id, ...) so that
running documents in any order, or in parallel, can never change a single
byte of the output. CSV and JSON serializations omit wall-clock timings
unless explicitly asked, keeping default reports reproducible bit for bit.
"""

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from .attack import AttackConfig, baseline_attack, xaifooler_attack
from .corpus import Document, LabeledDataset, StopwordSet
from .embed import EmbeddingStore
from .errors import ParameterError
from .explainer import SamplingConfig, explain
from .model import TextClassifier
from .ranksim import metrics_abs_rc_ins, rbo

CAMPAIGN_STRATEGIES = ("inherency", "xaifooler", "random", "lom", "lp")


def derive_seed(seed: int, *parts) -> int:
    """Stable per-unit seed from the global seed and any id parts.

    Hash based rather than arithmetic so that nearby global seeds, doc ids,
    or rates never produce correlated streams.
    """
    text = "|".join([str(seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class StabilityRow:
    doc_id: str
    n: int
    rbo: float
    abs: int
    ins: float


@dataclass
class StabilitySweepReport:
    base_n: int
    rates: tuple[int, ...]
    seed: int
    k: int
    rbo_p: float
    rows: tuple[StabilityRow, ...]

    def aggregates(self) -> dict[int, dict[str, float]]:
        out = {}
        for n in self.rates:
            sims = [r.rbo for r in self.rows if r.n == n]
            out[n] = {
                "mean": float(np.mean(sims)),
                "median": float(np.median(sims)),
                "min": float(min(sims)),
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["doc_id", "n", "rbo", "abs", "ins"])
        for r in self.rows:
            writer.writerow([r.doc_id, r.n, _fmt(r.rbo), r.abs, _fmt(r.ins)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "base_n": self.base_n,
                "rates": list(self.rates),
                "seed": self.seed,
                "k": self.k,
                "rbo_p": self.rbo_p,
                "rows": [asdict(r) for r in self.rows],
                "aggregates": {
                    str(n): agg for n, agg in self.aggregates().items()
                },
            },
            indent=2,
        )


def stability_sweep(
    f: TextClassifier,
    docs,
    base_n: int,
    rates,
    seed: int = 0,
    sampling: SamplingConfig | None = None,
    stopwords: StopwordSet | None = None,
    k: int = 5,
    rbo_p: float = 0.75,
) -> StabilitySweepReport:
    """Explain each doc at every rate and score against its base explanation.

    The base explanation uses base_n with the seed derived for (doc, base_n),
    so a sweep rate equal to base_n reproduces it exactly and its row reads
    similarity 1.0.
    """
    docs = list(docs)
    if not docs:
        raise ParameterError("stability sweep needs at least one document")
    rates = tuple(int(n) for n in rates)
    if not rates:
        raise ParameterError("stability sweep needs at least one rate")
    template = sampling if sampling is not None else SamplingConfig()
    stopwords = stopwords if stopwords is not None else StopwordSet.default()

    rows = []
    for doc in docs:
        base_cfg = replace(
            template, n=base_n, seed=derive_seed(seed, doc.id, base_n)
        )
        base = explain(f, doc, base_cfg, stopwords=stopwords)
        base_ranked = base.ranked()
        for n in rates:
            cfg = replace(template, n=n, seed=derive_seed(seed, doc.id, n))
            e = explain(f, doc, cfg, stopwords=stopwords)
            r = e.ranked()
            abs_change, _, ins = metrics_abs_rc_ins(base_ranked, r, k)
            rows.append(
                StabilityRow(
                    doc_id=doc.id,
                    n=n,
                    rbo=rbo(base_ranked, r, rbo_p),
                    abs=abs_change,
                    ins=ins,
                )
            )
    return StabilitySweepReport(
        base_n=base_n,
        rates=rates,
        seed=seed,
        k=k,
        rbo_p=rbo_p,
        rows=tuple(rows),
    )


# --------------------------------------------------------------- campaigns


class UnigramPerplexity:
    """Add-one smoothed unigram language model over a token corpus."""

    def __init__(self, docs):
        self.counts = {}
        total = 0
        for doc in docs:
            for t in doc.tokens:
                self.counts[t] = self.counts.get(t, 0) + 1
                total += 1
        self.total = total
        self.vocab = len(self.counts)

    def perplexity(self, doc: Document) -> float:
        if not doc.tokens:
            return float(self.vocab + 1)
        denom = self.total + self.vocab + 1
        log_sum = 0.0
        for t in doc.tokens:
            log_sum += math.log((self.counts.get(t, 0) + 1) / denom)
        return math.exp(-log_sum / len(doc.tokens))


@dataclass(frozen=True)
class CampaignRow:
    doc_id: str
    strategy: str
    abs: int
    rc: float
    ins: float
    sim: float
    ppl_proxy: float | None
    status: str
    substitutions: int
    seconds: float


@dataclass
class CampaignReport:
    strategies: tuple[str, ...]
    seed: int
    config: dict
    rows: tuple[CampaignRow, ...]

    def aggregates(self) -> dict[str, dict[str, float]]:
        out = {}
        for strategy in self.strategies:
            picked = [
                r for r in self.rows
                if r.strategy == strategy and r.status != "error"
            ]
            if not picked:
                out[strategy] = {}
                continue
            out[strategy] = {
                "abs": float(np.mean([r.abs for r in picked])),
                "rc": float(np.mean([r.rc for r in picked])),
                "ins": float(np.mean([r.ins for r in picked])),
                "sim": float(np.mean([r.sim for r in picked])),
            }
        return out

    def to_csv(self, include_seconds: bool = False) -> str:
        """One row per (doc, strategy).

        seconds stays blank unless asked for: wall-clock is the one column
        that would differ between otherwise identical runs.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "doc_id", "strategy", "abs", "rc", "ins", "sim",
                "ppl_proxy", "status", "substitutions", "seconds",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.doc_id,
                    r.strategy,
                    r.abs,
                    _fmt(r.rc),
                    _fmt(r.ins),
                    _fmt(r.sim),
                    _fmt(r.ppl_proxy),
                    r.status,
                    r.substitutions,
                    _fmt(r.seconds) if include_seconds else "",
                ]
            )
        return buf.getvalue()

    def to_json(self, include_timings: bool = False) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not include_timings:
                d.pop("seconds")
            rows.append(d)
        return json.dumps(
            {
                "strategies": list(self.strategies),
                "seed": self.seed,
                "config": self.config,
                "rows": rows,
                "aggregates": self.aggregates(),
            },
            indent=2,
        )


def _config_snapshot(config: AttackConfig) -> dict:
    snap = asdict(config)
    snap["sampling"] = asdict(config.sampling)
    return snap


def run_campaign(
    f: TextClassifier,
    dataset: LabeledDataset,
    store: EmbeddingStore,
    strategies,
    config: AttackConfig | None = None,
    seed: int = 0,
    stopwords: StopwordSet | None = None,
    pos_lexicon=None,
    max_docs: int | None = None,
    ppl_proxy: bool = False,
) -> CampaignReport:
    """Attack every evaluation document with every strategy.

    All strategies of one document share the same derived sampling seed, so
    they all face the identical base explanation. A failing document gets an
    error row instead of aborting the rest of the campaign.
    """
    strategies = tuple(strategies)
    for s in strategies:
        if s not in CAMPAIGN_STRATEGIES:
            raise ParameterError(
                f"unknown strategy {s!r}; choose from {CAMPAIGN_STRATEGIES}"
            )
    config = config if config is not None else AttackConfig()
    stopwords = stopwords if stopwords is not None else StopwordSet.default()

    pairs = dataset.test()
    if max_docs is not None:
        pairs = pairs[:max_docs]
    if not pairs:
        raise ParameterError("campaign has no evaluation documents")

    ppl = UnigramPerplexity([d for d, _ in dataset.train()]) if ppl_proxy else None

    rows = []
    for doc, _label in pairs:
        doc_seed = derive_seed(seed, doc.id)
        doc_cfg = replace(config, sampling=replace(config.sampling, seed=doc_seed))
        for strategy in strategies:
            start = time.perf_counter()
            try:
                rows.append(
                    _campaign_row(
                        f, doc, store, strategy, doc_cfg, seed,
                        stopwords, pos_lexicon, ppl,
                    )
                )
            except Exception:
                rows.append(
                    CampaignRow(
                        doc_id=doc.id, strategy=strategy, abs=0, rc=0.0,
                        ins=0.0, sim=0.0, ppl_proxy=None, status="error",
                        substitutions=0, seconds=0.0,
                    )
                )
                continue
            elapsed = time.perf_counter() - start
            rows[-1] = replace(rows[-1], seconds=elapsed)

    return CampaignReport(
        strategies=strategies,
        seed=seed,
        config={
            **_config_snapshot(config),
            "seed": seed,
            "num_docs": len(pairs),
            "ppl_proxy": ppl_proxy,
        },
        rows=tuple(rows),
    )


def _campaign_row(
    f, doc, store, strategy, doc_cfg, seed, stopwords, pos_lexicon, ppl
) -> CampaignRow:
    if strategy == "inherency":
        base = explain(f, doc, doc_cfg.sampling, stopwords=stopwords)
        retry_cfg = replace(
            doc_cfg.sampling, seed=derive_seed(seed, doc.id, "inherency")
        )
        again = explain(f, doc, retry_cfg, stopwords=stopwords)
        abs_change, rc, ins = metrics_abs_rc_ins(
            base.ranked(), again.ranked(), doc_cfg.k
        )
        return CampaignRow(
            doc_id=doc.id,
            strategy=strategy,
            abs=abs_change,
            rc=rc,
            ins=ins,
            sim=1.0,  # the document itself is untouched
            ppl_proxy=ppl.perplexity(doc) if ppl else None,
            status="inherency",
            substitutions=0,
            seconds=0.0,
        )

    if strategy == "xaifooler":
        result = xaifooler_attack(
            f, doc, store, doc_cfg, stopwords=stopwords, pos_lexicon=pos_lexicon
        )
    else:
        result = baseline_attack(
            f, doc, store, strategy, doc_cfg,
            stopwords=stopwords, pos_lexicon=pos_lexicon,
            seed=derive_seed(seed, doc.id, strategy),
        )
    abs_change, rc, ins, sim = result.metrics
    return CampaignRow(
        doc_id=doc.id,
        strategy=strategy,
        abs=abs_change,
        rc=rc,
        ins=ins,
        sim=sim,
        ppl_proxy=ppl.perplexity(result.pert_doc) if ppl else None,
        status=result.status,
        substitutions=result.num_substitutions,
        seconds=0.0,
    )
