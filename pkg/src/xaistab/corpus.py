"""Documents, tokenization, stopwords, and CSV dataset loading.

The tokenizer is deliberately simple and fixed: lowercase, then split on runs
of non-alphanumeric characters. Everything downstream (features, the victim
model's vocabulary, attack positions) is defined over these tokens.
"""

import csv
import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DatasetError

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Classic English stopword list, stored in tokenizer-consistent form: the
# tokenizer splits "don't" into ("don", "t"), so contraction fragments are
# separate entries rather than apostrophe forms.
_DEFAULT_STOPWORDS = (
    "a about above after again against all am an and any are as at be because "
    "been before being below between both but by can cannot could did do does "
    "doing down during each few for from further had has have having he her "
    "here hers herself him himself his how i if in into is it its itself just "
    "let me more most my myself no nor not now of off on once only or other "
    "ought our ours ourselves out over own same she should so some such than "
    "that the their theirs them themselves then there these they this those "
    "through to too under until up very was we were what when where which "
    "while who whom why will with would you your yours yourself yourselves "
    "aren couldn didn doesn don hadn hasn haven isn mustn shan shouldn wasn "
    "weren won wouldn ain ll re ve d m s t"
).split()


def tokenize(raw: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; punctuation is dropped."""
    return _TOKEN_RE.findall(raw.lower())


@dataclass(frozen=True)
class Document:
    """A tokenized text with a stable identifier.

    ``tokens`` is always exactly ``tokenize(raw)``; use the constructors below
    rather than building instances by hand.
    """

    id: str
    raw: str
    tokens: tuple[str, ...]

    @classmethod
    def from_raw(cls, raw: str, doc_id: str = "doc") -> "Document":
        return cls(id=doc_id, raw=raw, tokens=tuple(tokenize(raw)))

    @classmethod
    def from_tokens(cls, tokens, doc_id: str = "doc") -> "Document":
        raw = " ".join(tokens)
        toks = tuple(tokenize(raw))
        if list(toks) != list(tokens):
            raise ValueError("tokens must already be in tokenizer normal form")
        return cls(id=doc_id, raw=raw, tokens=toks)


class StopwordSet:
    """Case-insensitive stopword membership."""

    def __init__(self, words) -> None:
        self.words = frozenset(w.lower() for w in words)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def default(cls) -> "StopwordSet":
        return cls(_DEFAULT_STOPWORDS)

    @classmethod
    def from_file(cls, path) -> "StopwordSet":
        text = Path(path).read_text(encoding="utf-8")
        words = [w for w in text.split() if w]
        if not words:
            raise ConfigError(f"stopword file {path} contains no words")
        return cls(words)


def unique_features(doc: Document, stopwords: StopwordSet) -> list[str]:
    """Distinct non-stopword tokens in first-occurrence order.

    This is the document's interpretable feature set: mask sampling, the
    surrogate, and the attack budget are all defined over it.
    """
    seen = set()
    out = []
    for t in doc.tokens:
        if t in stopwords or t in seen:
            continue
        seen.add(t)
        out.append(t)
    return out


@dataclass
class LabeledDataset:
    """Documents with dense integer labels and a fixed train/test split."""

    documents: list[Document]
    labels: list[int]
    label_names: list[str]
    train_indices: list[int] = field(default_factory=list)
    test_indices: list[int] = field(default_factory=list)

    @property
    def num_labels(self) -> int:
        return len(self.label_names)

    def train(self):
        return [(self.documents[i], self.labels[i]) for i in self.train_indices]

    def test(self):
        return [(self.documents[i], self.labels[i]) for i in self.test_indices]


def load_csv(
    path,
    text_column: str = "text",
    label_column: str = "label",
    seed: int = 0,
    train_fraction: float = 0.8,
) -> LabeledDataset:
    """Load a header CSV into a LabeledDataset with a seeded 80/20 split.

    Label ids are dense and assigned in sorted order of the distinct label
    strings. Rows whose text tokenizes to nothing are dropped.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DatasetError(f"dataset file {path} is empty")
        for col in (text_column, label_column):
            if col not in reader.fieldnames:
                raise ConfigError(
                    f"column {col!r} not present in {path} "
                    f"(found: {', '.join(reader.fieldnames)})"
                )
        rows = [(row[text_column], row[label_column]) for row in reader]

    texts, label_strs = [], []
    for text, label in rows:
        if tokenize(text):
            texts.append(text)
            label_strs.append(label)
    if not texts:
        raise DatasetError(f"no non-empty documents in {path}")

    label_names = sorted(set(label_strs))
    if len(label_names) < 2:
        raise DatasetError(
            f"need at least 2 distinct labels, found {len(label_names)} in {path}"
        )
    label_ids = {name: i for i, name in enumerate(label_names)}

    documents = [
        Document.from_raw(text, doc_id=f"d{i:05d}") for i, text in enumerate(texts)
    ]
    labels = [label_ids[s] for s in label_strs]

    indices = list(range(len(documents)))
    random.Random(seed).shuffle(indices)
    cut = int(len(indices) * train_fraction)
    return LabeledDataset(
        documents=documents,
        labels=labels,
        label_names=label_names,
        train_indices=sorted(indices[:cut]),
        test_indices=sorted(indices[cut:]),
    )
