"""Documents, per-author vocabularies and the term-by-document matrix."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ._tree import ParseTree
from .features import FeatureSpec, extract
from .treebank import SentenceStats


@dataclass
class Document:
    doc_id: str
    author: str
    trees: Sequence[ParseTree]
    stats: SentenceStats = field(default_factory=SentenceStats)

    def __post_init__(self):
        if not self.trees:
            raise ValueError(f"document {self.doc_id!r} has no sentences")


class Corpus:
    """An ordered collection of documents grouped into author classes.

    Classes are numbered in order of each author's first appearance, which
    is also the tie-break order used by the classifier.
    """

    def __init__(self, documents: Sequence[Document]):
        if not documents:
            raise ValueError("empty corpus")
        seen = set()
        for d in documents:
            if d.doc_id in seen:
                raise ValueError(f"duplicate doc_id {d.doc_id!r}")
            seen.add(d.doc_id)
        self.documents = list(documents)
        self.classes: list[str] = list(dict.fromkeys(d.author for d in documents))
        self.members = {a: [j for j, d in enumerate(documents) if d.author == a]
                        for a in self.classes}
        self._counts: dict[FeatureSpec, list[Counter]] = {}

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def sizes(self) -> dict[str, int]:
        return {a: len(ix) for a, ix in self.members.items()}

    def counts(self, spec: FeatureSpec) -> list[Counter]:
        """Per-document feature counts, cached per spec."""
        if spec not in self._counts:
            self._counts[spec] = [extract(d.trees, spec) for d in self.documents]
        return self._counts[spec]


@dataclass(frozen=True)
class Vocabulary:
    keys: tuple
    spec: Optional[FeatureSpec] = None
    top_n: Optional[int] = None

    def __post_init__(self):
        if len(set(self.keys)) != len(self.keys):
            raise ValueError("vocabulary keys must be distinct")

    def __len__(self):
        return len(self.keys)

    def index(self) -> dict[str, int]:
        return {k: i for i, k in enumerate(self.keys)}


@dataclass
class TermDocMatrix:
    """``values[i, j]`` is the weight of ``row_keys[i]`` in document ``j``."""

    values: np.ndarray
    row_keys: tuple
    doc_ids: tuple
    authors: tuple
    normalized: bool = False
    zero_columns: tuple = ()
    classes: Optional[tuple] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        m, n = self.values.shape
        if len(self.row_keys) != m:
            raise ValueError(f"{len(self.row_keys)} row keys for {m} rows")
        if len(self.doc_ids) != n or len(self.authors) != n:
            raise ValueError("column metadata does not match the column count")
        if self.classes is None:
            self.classes = tuple(dict.fromkeys(self.authors))
        missing = set(self.authors) - set(self.classes)
        if missing:
            raise ValueError(f"authors {sorted(missing)} not among classes")

    @property
    def shape(self):
        return self.values.shape

    def labels(self) -> np.ndarray:
        """Class index of every column."""
        pos = {a: i for i, a in enumerate(self.classes)}
        return np.array([pos[a] for a in self.authors], dtype=int)

    def with_values(self, values, row_keys=None, normalized=False) -> "TermDocMatrix":
        return TermDocMatrix(values, tuple(row_keys) if row_keys is not None else self.row_keys,
                             self.doc_ids, self.authors, normalized, (), self.classes)

    def drop_column(self, j: int) -> "TermDocMatrix":
        keep = [i for i in range(self.values.shape[1]) if i != j]
        authors = tuple(self.authors[i] for i in keep)
        classes = tuple(a for a in self.classes if a in set(authors))
        return TermDocMatrix(self.values[:, keep], self.row_keys,
                             tuple(self.doc_ids[i] for i in keep), authors,
                             self.normalized, (), classes)


def author_totals(corpus: Corpus, spec: FeatureSpec) -> dict[str, Counter]:
    totals = {a: Counter() for a in corpus.classes}
    for doc, counts in zip(corpus.documents, corpus.counts(spec)):
        totals[doc.author].update(counts)
    return totals


def top_n_keys(counts: Mapping[str, int], n: int) -> list[str]:
    # largest counts first, lexicographic key order among equal counts
    return sorted(counts, key=lambda k: (-counts[k], k))[:n]


def top_n_union(totals: Mapping[str, Counter], n: int,
                spec: Optional[FeatureSpec] = None) -> Vocabulary:
    """Union over authors of each author's ``n`` most frequent keys, sorted."""
    if n < 1:
        raise ValueError("top-N needs N >= 1")
    union = set()
    for author, counts in totals.items():
        if not counts:
            raise ValueError(f"author {author!r} has no features")
        union.update(top_n_keys(counts, n))
    return Vocabulary(tuple(sorted(union)), spec, n)


def union_intersection_report(totals: Mapping[str, Counter]) -> tuple[int, int]:
    sets = [set(c) for c in totals.values()]
    if not sets:
        return 0, 0
    return len(set().union(*sets)), len(set.intersection(*sets))


def build_matrix(corpus: Corpus, vocab: Vocabulary, normalize: bool = True,
                 spec: Optional[FeatureSpec] = None) -> TermDocMatrix:
    """Fill the term-by-document matrix; optionally scale columns to sum 1.

    Columns that share no key with the vocabulary stay zero and are listed
    in ``zero_columns`` instead of being scaled.
    """
    if not len(vocab):
        raise ValueError("empty vocabulary")
    spec = spec or vocab.spec
    if spec is None:
        raise ValueError("no feature spec given")
    index = vocab.index()
    values = np.zeros((len(vocab), len(corpus)))
    for j, counts in enumerate(corpus.counts(spec)):
        for key, c in counts.items():
            i = index.get(key)
            if i is not None:
                values[i, j] = c
    sums = values.sum(axis=0)
    zero = tuple(corpus.documents[j].doc_id for j in np.flatnonzero(sums == 0))
    if normalize:
        nz = sums > 0
        values[:, nz] /= sums[nz]
    return TermDocMatrix(values, vocab.keys,
                         tuple(d.doc_id for d in corpus),
                         tuple(d.author for d in corpus),
                         normalize, zero, tuple(corpus.classes))


def segment(trees: Sequence, parts: int) -> list[list]:
    """Split into ``parts`` contiguous runs; earlier runs get the extra items."""
    if parts < 1:
        raise ValueError("need at least one segment")
    if parts > len(trees):
        raise ValueError(f"cannot split {len(trees)} sentences into {parts} segments")
    size, extra = divmod(len(trees), parts)
    out, start = [], 0
    for k in range(parts):
        stop = start + size + (1 if k < extra else 0)
        out.append(list(trees[start:stop]))
        start = stop
    return out
