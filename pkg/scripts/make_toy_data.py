"""Generate the toy corpus, embeddings, and POS lexicon into a directory.

Usage: python scripts/make_toy_data.py --output data [--num-docs 260] [--seed 0]
"""

import argparse
from pathlib import Path

from xaistab.synth import (
    make_pos_lexicon,
    make_toy_corpus,
    make_toy_embeddings,
    write_corpus_csv,
    write_embeddings,
    write_pos_lexicon,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", default="data")
    parser.add_argument("--num-docs", type=int, default=260)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.output)
    write_corpus_csv(make_toy_corpus(args.num_docs, seed=args.seed), out / "toy.csv")
    write_embeddings(make_toy_embeddings(seed=args.seed), out / "embeddings.txt")
    write_pos_lexicon(make_pos_lexicon(), out / "pos_lexicon.tsv")
    print(f"wrote {out / 'toy.csv'}, {out / 'embeddings.txt'}, {out / 'pos_lexicon.tsv'}")


if __name__ == "__main__":
    main()
