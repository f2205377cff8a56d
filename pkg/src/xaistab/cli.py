"""Command line front end.

Subcommands: train, explain, stability, attack, eval. Exit codes: 0 on
success, 1 on usage errors (bad flags, malformed key=value overrides), 2 on
data or model errors (missing or malformed files, bad datasets).
"""

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path

from .attack import (
    PRESETS,
    STRATEGIES,
    AttackConfig,
    baseline_attack,
    xaifooler_attack,
)
from .corpus import Document, StopwordSet, load_csv
from .embed import load_embeddings, load_pos_lexicon
from .errors import XaistabError
from .explainer import SamplingConfig, explain
from .harness import CAMPAIGN_STRATEGIES, run_campaign, stability_sweep
from .model import load_model, save_model, train_bow_logistic


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse's own failures through our exit-code policy
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


_SAMPLING_KEYS = {f.name for f in fields(SamplingConfig)}
_ATTACK_KEYS = {f.name for f in fields(AttackConfig)} - {"sampling"}
_TRAIN_KEYS = {"l2_penalty", "max_epochs", "learning_rate"}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _load_overrides(items) -> dict:
    """Collect --config entries: JSON files or key=value pairs, in order."""
    overrides = {}
    for item in items or []:
        if "=" in item:
            key, _, value = item.partition("=")
            key = key.strip()
            if not key:
                raise UsageError(f"malformed config override {item!r}")
            overrides[key] = _parse_value(value.strip())
            continue
        path = Path(item)
        if not path.exists():
            raise UsageError(
                f"config {item!r} is neither key=value nor an existing file"
            )
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise XaistabError(
                f"config file {path} is malformed at offset {e.pos}: {e.msg}"
            ) from None
        if not isinstance(payload, dict):
            raise XaistabError(f"config file {path} must hold a JSON object")
        overrides.update(payload)
    return overrides


def _split_overrides(overrides: dict):
    sampling = {k: v for k, v in overrides.items() if k in _SAMPLING_KEYS}
    attack = {k: v for k, v in overrides.items() if k in _ATTACK_KEYS}
    train = {k: v for k, v in overrides.items() if k in _TRAIN_KEYS}
    known = _SAMPLING_KEYS | _ATTACK_KEYS | _TRAIN_KEYS | {"preset"}
    unknown = [k for k in overrides if k not in known]
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return sampling, attack, train


def _build_configs(args, seed: int):
    overrides = _load_overrides(getattr(args, "config", None))
    preset = overrides.get("preset", "default")
    if preset not in PRESETS:
        raise UsageError(
            f"unknown preset {preset!r}; choose from {sorted(PRESETS)}"
        )
    sampling_kw, attack_kw, train_kw = _split_overrides(overrides)
    sampling = replace(SamplingConfig(seed=seed), **sampling_kw)
    attack_cfg = replace(PRESETS[preset], sampling=sampling, **attack_kw)
    return sampling, attack_cfg, train_kw


def _stopwords(args) -> StopwordSet:
    if getattr(args, "stopwords", None):
        return StopwordSet.from_file(args.stopwords)
    return StopwordSet.default()


def _out_dir(args) -> Path:
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> _Parser:
    parser = _Parser(prog="xaistab", description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", help="output directory (default: cwd)")
    parser.add_argument(
        "--config",
        action="append",
        help="key=value override or JSON config file; repeatable",
    )
    # the same globals are accepted after the subcommand; SUPPRESS keeps a
    # missing subcommand-level flag from wiping the root-level value
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS)
    common.add_argument("--config", action="append", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("train", help="train a bag-of-words classifier")
    p.add_argument("--data", required=True, help="CSV with text,label columns")
    p.add_argument("--model-out", default="model.json")

    p = add_parser("explain", help="explain one document")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--stopwords")
    p.add_argument("--json-out", help="write the explanation here, not stdout")

    p = add_parser("stability", help="sampling-rate stability sweep")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--rates", default="250,500,1000,2000")
    p.add_argument("--base-n", type=int, default=2000)
    p.add_argument("--num-docs", type=int, default=20)
    p.add_argument("--stopwords")

    p = add_parser("attack", help="attack one document's explanation")
    p.add_argument("--model", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--strategy", default="xaifooler", choices=STRATEGIES)
    p.add_argument("--stopwords")
    p.add_argument("--pos-lexicon")
    p.add_argument("--json-out")

    p = add_parser("eval", help="multi-strategy attack campaign")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--strategies", default="inherency,xaifooler,random")
    p.add_argument("--max-docs", type=int)
    p.add_argument("--ppl-proxy", action="store_true")
    p.add_argument("--include-seconds", action="store_true")
    p.add_argument("--stopwords")
    p.add_argument("--pos-lexicon")

    return parser


def _cmd_train(args) -> int:
    _, _, train_kw = _build_configs(args, args.seed)
    dataset = load_csv(args.data, seed=args.seed)
    model = train_bow_logistic(dataset, **train_kw)
    out = _out_dir(args) / args.model_out
    save_model(model, out)
    print(f"wrote {out}")
    return 0


def _cmd_explain(args) -> int:
    sampling, _, _ = _build_configs(args, args.seed)
    model = load_model(args.model)
    doc = Document.from_raw(args.text, "cli")
    e = explain(model, doc, sampling, stopwords=_stopwords(args))
    payload = e.to_json()
    if args.json_out:
        path = _out_dir(args) / args.json_out
        path.write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {path}")
    else:
        print(payload)
    return 0


def _cmd_stability(args) -> int:
    sampling, attack_cfg, _ = _build_configs(args, args.seed)
    model = load_model(args.model)
    dataset = load_csv(args.data, seed=args.seed)
    try:
        rates = [int(r) for r in args.rates.split(",") if r.strip()]
    except ValueError:
        raise UsageError(f"--rates must be comma-separated ints: {args.rates!r}")
    docs = [d for d, _ in dataset.test()][: args.num_docs]
    report = stability_sweep(
        model, docs, args.base_n, rates, seed=args.seed,
        sampling=sampling, stopwords=_stopwords(args),
        k=attack_cfg.k, rbo_p=attack_cfg.rbo_p,
    )
    out = _out_dir(args)
    (out / "stability.csv").write_text(report.to_csv(), encoding="utf-8")
    (out / "stability.json").write_text(report.to_json() + "\n", encoding="utf-8")
    print(f"wrote {out / 'stability.csv'} and {out / 'stability.json'}")
    return 0


def _cmd_attack(args) -> int:
    _, attack_cfg, _ = _build_configs(args, args.seed)
    model = load_model(args.model)
    store = load_embeddings(args.embeddings)
    lexicon = load_pos_lexicon(args.pos_lexicon) if args.pos_lexicon else None
    doc = Document.from_raw(args.text, "cli")
    sw = _stopwords(args)
    if args.strategy == "xaifooler":
        result = xaifooler_attack(
            model, doc, store, attack_cfg, stopwords=sw, pos_lexicon=lexicon
        )
    else:
        result = baseline_attack(
            model, doc, store, args.strategy, attack_cfg,
            stopwords=sw, pos_lexicon=lexicon, seed=args.seed,
        )
    abs_change, rc, ins, sim = result.metrics
    payload = json.dumps(
        {
            "strategy": result.strategy,
            "status": result.status,
            "base_doc": {"raw": result.base_doc.raw, "tokens": list(result.base_doc.tokens)},
            "pert_doc": {"raw": result.pert_doc.raw, "tokens": list(result.pert_doc.tokens)},
            "base_expl": json.loads(result.base_expl.to_json()),
            "pert_expl": json.loads(result.pert_expl.to_json()),
            "similarity": result.similarity,
            "metrics": {"abs": abs_change, "rc": rc, "ins": ins, "sim": sim},
            "substitutions": [
                {"position": s.position, "old": s.old, "new": s.new, "score": s.score}
                for s in result.substitutions
            ],
            "constraint_audit": result.constraint_audit,
            "search_stats": result.search_stats,
        },
        indent=2,
    )
    if args.json_out:
        path = _out_dir(args) / args.json_out
        path.write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {path}")
    else:
        print(payload)
    return 0


def _cmd_eval(args) -> int:
    _, attack_cfg, _ = _build_configs(args, args.seed)
    model = load_model(args.model)
    dataset = load_csv(args.data, seed=args.seed)
    store = load_embeddings(args.embeddings)
    lexicon = load_pos_lexicon(args.pos_lexicon) if args.pos_lexicon else None
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in strategies:
        if s not in CAMPAIGN_STRATEGIES:
            raise UsageError(
                f"unknown strategy {s!r}; choose from {CAMPAIGN_STRATEGIES}"
            )
    report = run_campaign(
        model, dataset, store, strategies, config=attack_cfg,
        seed=args.seed, stopwords=_stopwords(args), pos_lexicon=lexicon,
        max_docs=args.max_docs, ppl_proxy=args.ppl_proxy,
    )
    out = _out_dir(args)
    (out / "campaign.csv").write_text(
        report.to_csv(include_seconds=args.include_seconds), encoding="utf-8"
    )
    (out / "campaign.json").write_text(
        report.to_json(include_timings=args.include_seconds) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {out / 'campaign.csv'} and {out / 'campaign.json'}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "explain": _cmd_explain,
    "stability": _cmd_stability,
    "attack": _cmd_attack,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_usage(sys.stderr)
            print("xaistab: error: a subcommand is required", file=sys.stderr)
            return 1
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"xaistab: error: file not found: {e.filename or e}", file=sys.stderr)
        return 2
    except XaistabError as e:
        print(f"xaistab: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
