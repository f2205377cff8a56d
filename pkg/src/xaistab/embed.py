"""Word embeddings: loading, nearest neighbors, document similarity, POS filter.

The store is a plain token -> vector table loaded from the common text format
(one token followed by its components per line). Neighbor search is an
exhaustive cosine scan; at the vocabulary sizes this package targets there is
nothing to index.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Document
from .errors import FormatError


@dataclass
class EmbeddingStore:
    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass
class CandidateSet:
    """Substitution candidates for one word, best cosine first."""

    word: str
    candidates: list[tuple[str, float]]


def load_embeddings(path) -> EmbeddingStore:
    """Parse a text embedding file.

    An optional first line of exactly two integers ("count dim") is treated
    as a header and skipped. Duplicate tokens keep the first occurrence.
    Dimension mismatches and unparsable components raise FormatError with the
    offending line number.
    """
    path = Path(path)
    if not path.exists():
        raise FormatError(f"embedding file not found: {path}")
    vectors: dict[str, np.ndarray] = {}
    dim = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and _both_ints(parts):
                continue  # vocabulary-count header
            token, comps = parts[0], parts[1:]
            if not comps:
                raise FormatError(
                    f"{path}:{lineno}: token {token!r} has no vector components"
                )
            try:
                vec = np.array([float(c) for c in comps])
            except ValueError:
                raise FormatError(
                    f"{path}:{lineno}: non-numeric vector component for {token!r}"
                )
            if dim == 0:
                dim = len(vec)
            elif len(vec) != dim:
                raise FormatError(
                    f"{path}:{lineno}: expected {dim} components, got {len(vec)}"
                )
            if token not in vectors:
                vectors[token] = vec
    return EmbeddingStore(dim=dim, vectors=vectors)


def _both_ints(parts) -> bool:
    try:
        int(parts[0]), int(parts[1])
    except ValueError:
        return False
    return True


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def nearest_neighbors(
    store: EmbeddingStore,
    token: str,
    max_candidates: int = 50,
    min_cosine: float = 0.5,
) -> CandidateSet:
    """Exhaustive cosine scan; the query token itself is never a candidate.

    Ordering is deterministic: cosine descending, then token ascending.
    Unknown tokens yield an empty candidate list.
    """
    query = store.vectors.get(token)
    if query is None:
        return CandidateSet(word=token, candidates=[])
    scored = []
    for other, vec in store.vectors.items():
        if other == token:
            continue
        c = _cosine(query, vec)
        if c >= min_cosine:
            scored.append((other, c))
    scored.sort(key=lambda tc: (-tc[1], tc[0]))
    return CandidateSet(word=token, candidates=scored[:max_candidates])


def semantic_similarity(store: EmbeddingStore, a: Document, b: Document) -> float:
    """Cosine similarity of mean in-vocabulary token vectors.

    Identical token sequences score 1.0 regardless of vocabulary coverage;
    if either document has no in-vocabulary token (and they differ), 0.0.
    """
    if list(a.tokens) == list(b.tokens):
        return 1.0
    va = _mean_vector(store, a)
    vb = _mean_vector(store, b)
    if va is None or vb is None:
        return 0.0
    return _cosine(va, vb)


def _mean_vector(store: EmbeddingStore, doc: Document):
    vecs = [store.vectors[t] for t in doc.tokens if t in store.vectors]
    if not vecs:
        return None
    return np.mean(vecs, axis=0)


def load_pos_lexicon(path) -> dict[str, str]:
    """token<TAB>tag per line; later duplicates overwrite earlier ones."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"POS lexicon not found: {path}")
    lexicon: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise FormatError(f"{path}:{lineno}: expected 'token<TAB>tag'")
            lexicon[parts[0].lower()] = parts[1]
    return lexicon


def pos_compatible(lexicon, a: str, b: str) -> bool:
    """True when the lexicon does not forbid substituting a -> b.

    With no lexicon, or with either token untagged, the constraint is
    skipped (permissive).
    """
    if not lexicon:
        return True
    ta, tb = lexicon.get(a.lower()), lexicon.get(b.lower())
    if ta is None or tb is None:
        return True
    return ta == tb
