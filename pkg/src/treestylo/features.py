"""The four tree feature families, as sparse counts.

Every extractor returns a :class:`collections.Counter` keyed by a string:

========================  ==============================================
all subtrees (depth d)    canonical subtree cut ``d`` edges below a node
rooted subtree (level L)  canonical sentence tree cut at level ``L``
POS counts                the token itself, e.g. ``NP``
POS by level              ``"level:token"``, root at level 1, e.g. ``3:VP``
========================  ==============================================

Trees must already be normalized (word-free).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from . import _kernels
from ._tree import ParseTree

ALL_SUBTREES = "all-subtrees"
ROOTED = "rooted"
POS = "pos"
POS_BY_LEVEL = "pos-by-level"
KINDS = (ALL_SUBTREES, ROOTED, POS, POS_BY_LEVEL)

FeatureCounts = Counter


@dataclass(frozen=True)
class FeatureSpec:
    """Which feature family to extract; ``param`` is the depth or level."""

    kind: str
    param: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in (ALL_SUBTREES, ROOTED):
            if not isinstance(self.param, int) or self.param < 1:
                raise ValueError(f"{self.kind} needs a positive integer depth/level, "
                                 f"got {self.param!r}")
        elif self.param is not None:
            raise ValueError(f"{self.kind} takes no depth/level")

    @classmethod
    def all_subtrees(cls, depth: int) -> "FeatureSpec":
        return cls(ALL_SUBTREES, depth)

    @classmethod
    def rooted(cls, level: int) -> "FeatureSpec":
        return cls(ROOTED, level)

    @classmethod
    def pos(cls) -> "FeatureSpec":
        return cls(POS)

    @classmethod
    def pos_by_level(cls) -> "FeatureSpec":
        return cls(POS_BY_LEVEL)

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}:{self.param}"


def all_subtrees(t: ParseTree, depth: int) -> Counter:
    """Depth-``depth`` subtrees anchored at every node of height >= ``depth``.

    Each anchor contributes the subtree cut exactly ``depth`` edges below it,
    so every key has a longest root-to-leaf path of exactly ``depth``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return Counter(_kernels.subtree_counts(t, depth))


def rooted_subtree(t: ParseTree, level: int) -> str:
    """Canonical form of ``t`` cut ``level`` edges below the root.

    Nodes ``level`` edges below the root keep their label and lose their
    children; a tree shallower than ``level`` comes back whole.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    return _kernels.truncated(t, level)


def pos_counts(t: ParseTree) -> Counter:
    return Counter(_kernels.label_counts(t))


def pos_by_level(t: ParseTree) -> Counter:
    return Counter(_kernels.level_counts(t))


def extract_one(t: ParseTree, spec: FeatureSpec) -> Counter:
    if spec.kind == ALL_SUBTREES:
        return all_subtrees(t, spec.param)
    if spec.kind == ROOTED:
        return Counter({rooted_subtree(t, spec.param): 1})
    if spec.kind == POS:
        return pos_counts(t)
    return pos_by_level(t)


def extract(trees: Iterable[ParseTree], spec: FeatureSpec) -> Counter:
    """Sum the per-sentence counts of ``spec`` over ``trees``."""
    total = Counter()
    if spec.kind == ALL_SUBTREES:
        for t in trees:
            total.update(_kernels.subtree_counts(t, spec.param))
    elif spec.kind == ROOTED:
        total.update(_kernels.truncated(t, spec.param) for t in trees)
    elif spec.kind == POS:
        for t in trees:
            total.update(_kernels.label_counts(t))
    else:
        for t in trees:
            total.update(_kernels.level_counts(t))
    return total


def parse_key(key: str, kind: str):
    """Invert a feature key back into its structured form.

    Subtree keys become a :class:`ParseTree`, POS keys stay a token and
    POS-by-level keys become ``(level, token)``.
    """
    if kind in (ALL_SUBTREES, ROOTED):
        trees = _kernels.parse_sexprs(key)
        if len(trees) != 1:
            raise ValueError(f"{key!r} is not a single tree")
        return trees[0]
    if kind == POS:
        return key
    if kind == POS_BY_LEVEL:
        level, _, token = key.partition(":")
        if not level.isdigit() or int(level) < 1 or not token:
            raise ValueError(f"bad pos-by-level key {key!r}")
        return int(level), token
    raise ValueError(f"unknown feature kind {kind!r}")
