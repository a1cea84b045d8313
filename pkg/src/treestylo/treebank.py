"""Reading and tidying constituency trees.

Trees arrive as Penn-Treebank style S-expressions such as::

    (ROOT (S (NP (PRP you)) (, ,) (VP (VBP are)) (. .)))

Before feature extraction the parser's ``ROOT`` wrapper, punctuation nodes
and the words themselves are removed, which leaves a tree of tokens whose
canonical, whitespace-free string ``(S(NP(PRP))(VP(VBP)))`` doubles as a
dictionary key.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import _kernels
from ._tree import ParseTree, TreeSyntaxError

__all__ = [
    "DEFAULT_PUNCTUATION",
    "NormalizationConfig",
    "ParseTree",
    "SentenceStats",
    "TreeSyntaxError",
    "canonicalize",
    "normalize",
    "normalize_all",
    "parse_trees",
    "read_tree_file",
    "stats",
]

#: Punctuation tags of the Penn tagset. ``-LRB-``/``-RRB-`` are how parsers
#: spell the bracket tags, which cannot appear literally in an S-expression.
DEFAULT_PUNCTUATION = frozenset({
    "$", "#", "``", "''", "(", ")", "-LRB-", "-RRB-", ",", ".", ":", "`", "'",
    '"',
})


@dataclass(frozen=True)
class NormalizationConfig:
    drop_root: bool = True
    strip_words: bool = True
    punctuation_labels: frozenset = field(default=DEFAULT_PUNCTUATION)

    def __post_init__(self):
        object.__setattr__(self, "punctuation_labels",
                           frozenset(self.punctuation_labels))


@dataclass(frozen=True)
class SentenceStats:
    sentence_count: int = 0
    word_count: int = 0

    def __add__(self, other: "SentenceStats") -> "SentenceStats":
        return SentenceStats(self.sentence_count + other.sentence_count,
                             self.word_count + other.word_count)


def parse_trees(text: str) -> list[ParseTree]:
    """Parse every top-level S-expression in ``text``, in order.

    Raises :class:`TreeSyntaxError` (a ``ValueError``) carrying the 1-based
    byte offset of the problem for unbalanced parentheses, empty labels and
    bare words outside a node.
    """
    return _kernels.parse_sexprs(text)


def read_tree_file(path) -> list[ParseTree]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return parse_trees(text)
    except TreeSyntaxError as exc:
        raise TreeSyntaxError(f"{path}: {exc.reason}", exc.offset) from None


def _prune(node: ParseTree, punct: frozenset, strip: bool) -> Optional[ParseTree]:
    if node.label in punct:
        return None
    kids = []
    for c in node.children:
        kept = _prune(c, punct, strip)
        if kept is not None:
            kids.append(kept)
    return ParseTree._raw(node.label, tuple(kids), None if strip else node.word)


def normalize(t: ParseTree, cfg: NormalizationConfig = NormalizationConfig()) -> ParseTree:
    """Drop ``ROOT``, punctuation subtrees and words, as configured.

    A ``ROOT`` with anything other than exactly one child is rejected, as is
    a tree that is nothing but punctuation.
    """
    if cfg.drop_root and t.label == "ROOT":
        if len(t.children) != 1:
            raise ValueError(f"ROOT node with {len(t.children)} children; "
                             "expected a single sentence")
        t = t.children[0]
    out = _prune(t, cfg.punctuation_labels, cfg.strip_words)
    if out is None:
        raise ValueError(f"tree {t.to_sexpr()!r} is entirely punctuation")
    return out


def normalize_all(trees: Iterable[ParseTree],
                  cfg: NormalizationConfig = NormalizationConfig()) -> list[ParseTree]:
    return [normalize(t, cfg) for t in trees]


def canonicalize(t: ParseTree) -> str:
    """``"(" + label + children + ")"`` with no whitespace; ``t`` must be word-free."""
    return _kernels.canonical(t)


def stats(trees: Sequence[ParseTree],
          punctuation_labels: frozenset = DEFAULT_PUNCTUATION) -> SentenceStats:
    # words under a punctuation node are punctuation marks, not words
    words = 0
    for t in trees:
        stack = [t]
        while stack:
            node = stack.pop()
            if node.label in punctuation_labels:
                continue
            if node.word is not None:
                words += 1
            stack.extend(node.children)
    return SentenceStats(len(trees), words)

