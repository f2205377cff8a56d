"""Train on the toy corpus and run a multi-strategy attack campaign.

Usage: python scripts/run_attack_campaign.py --data data/toy.csv \
    --embeddings data/embeddings.txt --output results
"""

import argparse
from dataclasses import replace
from pathlib import Path

from xaistab.attack import PRESETS
from xaistab.corpus import load_csv
from xaistab.embed import load_embeddings
from xaistab.explainer import SamplingConfig
from xaistab.harness import run_campaign
from xaistab.model import train_bow_logistic


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="data/toy.csv")
    parser.add_argument("--embeddings", default="data/embeddings.txt")
    parser.add_argument("--output", default="results")
    parser.add_argument("--strategies", default="inherency,xaifooler,random,lom,lp")
    parser.add_argument("--preset", default="default", choices=sorted(PRESETS))
    parser.add_argument("--sampling-n", type=int, default=500)
    parser.add_argument("--max-docs", type=int)
    parser.add_argument("--ppl-proxy", action="store_true")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    dataset = load_csv(args.data, seed=args.seed)
    model = train_bow_logistic(dataset)
    store = load_embeddings(args.embeddings)
    config = replace(
        PRESETS[args.preset], sampling=SamplingConfig(n=args.sampling_n)
    )
    strategies = [s for s in args.strategies.split(",") if s]

    report = run_campaign(
        model, dataset, store, strategies, config=config, seed=args.seed,
        max_docs=args.max_docs, ppl_proxy=args.ppl_proxy,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "campaign.csv").write_text(report.to_csv(), encoding="utf-8")
    (out / "campaign.json").write_text(report.to_json() + "\n", encoding="utf-8")

    print(f"wrote {out / 'campaign.csv'} and {out / 'campaign.json'}")
    for strategy, agg in report.aggregates().items():
        if agg:
            print(
                f"  {strategy:>10}  abs={agg['abs']:.2f}  rc={agg['rc']:.3f}  "
                f"ins={agg['ins']:.3f}  sim={agg['sim']:.4f}"
            )


if __name__ == "__main__":
    main()
