"""Deterministic toy data: a sentiment-ish corpus with synonym families.

Every content word belongs to a family that owns one coordinate axis of the
embedding space; siblings are the axis direction plus a little noise, so
within-family cosines land around 0.86-0.93 while cross-family cosines stay
near zero. That gives the substitution search real synonyms to work with and
makes the semantic-similarity constraint meaningful on generated documents.
"""

import csv
from pathlib import Path

import numpy as np

from .embed import EmbeddingStore

POSITIVE_FAMILIES = [
    ["good", "great", "fine", "solid", "nice"],
    ["tasty", "delicious", "savory", "yummy"],
    ["enjoyable", "pleasant", "fun", "delightful"],
    ["loved", "adored", "liked"],
    ["brilliant", "superb", "excellent", "wonderful"],
]

NEGATIVE_FAMILIES = [
    ["bad", "poor", "weak", "awful"],
    ["bland", "tasteless", "stale"],
    ["boring", "tedious", "dull", "dreary"],
    ["hated", "disliked", "despised"],
    ["terrible", "horrible", "dreadful"],
]

NEUTRAL_FAMILIES = [
    ["meal", "dish", "platter", "course"],
    ["place", "venue", "spot", "location"],
    ["staff", "server", "waiter", "crew"],
    ["plot", "story", "script", "narrative"],
    ["scene", "sequence", "shot"],
    ["actor", "performer", "cast"],
    ["price", "cost", "bill", "tab"],
    ["night", "evening", "afternoon"],
]

# these all sit in the default stopword list, so they never become features
FILLERS = ["the", "a", "and", "of", "to", "it", "was", "we", "i", "very", "with", "for"]

ALL_FAMILIES = POSITIVE_FAMILIES + NEGATIVE_FAMILIES + NEUTRAL_FAMILIES


def _pick(rng, families):
    fam = families[int(rng.integers(len(families)))]
    return fam[int(rng.integers(len(fam)))]


def make_toy_corpus(num_docs: int = 260, seed: int = 0) -> list[tuple[str, str]]:
    """Generate (text, label) rows, alternating pos/neg for exact balance.

    Documents run 38-54 tokens: roughly 40% stopword filler, 32% neutral
    nouns, 28% sentiment words of which 80% come from the document's own
    class. The 20% leakage keeps the trained model off probability
    saturation so deletion probing has gradients to see.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(num_docs):
        label = "pos" if i % 2 == 0 else "neg"
        own = POSITIVE_FAMILIES if label == "pos" else NEGATIVE_FAMILIES
        other = NEGATIVE_FAMILIES if label == "pos" else POSITIVE_FAMILIES
        n = int(rng.integers(38, 55))
        n_filler = round(0.40 * n)
        n_neutral = round(0.32 * n)
        n_class = n - n_filler - n_neutral
        tokens = [FILLERS[int(rng.integers(len(FILLERS)))] for _ in range(n_filler)]
        tokens += [_pick(rng, NEUTRAL_FAMILIES) for _ in range(n_neutral)]
        for _ in range(n_class):
            source = own if rng.random() < 0.8 else other
            tokens.append(_pick(rng, source))
        rng.shuffle(tokens)
        rows.append((" ".join(tokens), label))
    return rows


def write_corpus_csv(rows, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "label"])
        writer.writerows(rows)


def make_toy_embeddings(dim: int = 32, seed: int = 0, noise: float = 0.07) -> EmbeddingStore:
    """One axis per family; siblings share it up to noise.

    Fillers get clean axes of their own so they exist in the store (the
    document similarity sees them) but attract no substitution candidates.
    """
    if dim < len(ALL_FAMILIES) + len(FILLERS):
        raise ValueError(
            f"dim must be >= {len(ALL_FAMILIES) + len(FILLERS)}, got {dim}"
        )
    rng = np.random.default_rng(seed)
    vectors = {}
    for axis, family in enumerate(ALL_FAMILIES):
        base = np.zeros(dim)
        base[axis] = 1.0
        for word in family:
            v = base + noise * rng.standard_normal(dim)
            vectors[word] = v / np.linalg.norm(v)
    for j, word in enumerate(FILLERS):
        v = np.zeros(dim)
        v[len(ALL_FAMILIES) + j] = 1.0
        vectors[word] = v
    return EmbeddingStore(dim=dim, vectors=vectors)


def write_embeddings(store: EmbeddingStore, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(store.vectors)} {store.dim}\n")
        for word in sorted(store.vectors):
            comps = " ".join(repr(float(x)) for x in store.vectors[word])
            fh.write(f"{word} {comps}\n")


def make_pos_lexicon() -> dict[str, str]:
    tags = {}
    for family in POSITIVE_FAMILIES + NEGATIVE_FAMILIES:
        for word in family:
            tags[word] = "ADJ"
    for family in NEUTRAL_FAMILIES:
        for word in family:
            tags[word] = "NOUN"
    for word in FILLERS:
        tags[word] = "FUNC"
    return tags


def write_pos_lexicon(lexicon: dict[str, str], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for word in sorted(lexicon):
            fh.write(f"{word}\t{lexicon[word]}\n")
