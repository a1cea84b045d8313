"""Leave-one-out nearest-centroid classification.

Each document vector ``v`` of class ``i`` is held out of its own class;
class ``i``'s centroid is recomputed from the remaining ``n_i - 1`` members
while every other class keeps its full centroid. ``v`` is assigned to the
nearest centroid in Euclidean distance, ties going to the lowest class index.

All ``n`` documents are scored, so error counts are out of ``n``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .corpus import TermDocMatrix
from .reducer import compute_projection, fit_projection, project, centroids, scatter_factors

MODES = ("none", "paper", "strict")


@dataclass(frozen=True)
class LooConfig:
    """``paper`` fits G once on all columns; ``strict`` refits it per held-out column."""

    projection_mode: str = "none"
    ell: Optional[int] = None
    rank_tol: float = 1e-12

    def __post_init__(self):
        if self.projection_mode not in MODES:
            raise ValueError(f"projection_mode must be one of {MODES}")
        if (self.ell is None) != (self.projection_mode == "none"):
            raise ValueError("ell is required exactly when a projection mode is set")
        if self.ell is not None and self.ell < 1:
            raise ValueError("ell must be >= 1")


@dataclass(frozen=True)
class AliasMap:
    """Author pairs counted as the same person, e.g. ``{"HandM": "Madison"}``."""

    pairs: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        pairs = dict(self.pairs)
        for src, dst in pairs.items():
            if src == dst:
                raise ValueError(f"alias {src}={dst} maps an author to itself")
            if dst in pairs:
                raise ValueError(f"alias target {dst!r} is itself aliased; "
                                 "aliases must be single-step")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def parse(cls, items: Iterable[str]) -> "AliasMap":
        pairs = {}
        for item in items:
            src, sep, dst = item.partition("=")
            if not sep or not src or not dst:
                raise ValueError(f"alias must look like FROM=TO, got {item!r}")
            pairs[src] = dst
        return cls(pairs)

    def same(self, a: str, b: str) -> bool:
        return a == b or self.pairs.get(a) == b or self.pairs.get(b) == a


@dataclass
class Prediction:
    doc_id: str
    true: str
    predicted: str
    distances: np.ndarray


@dataclass
class LooResult:
    predictions: list
    classes: tuple
    error_count: int
    confusion: np.ndarray
    adjusted_error_count: int
    warnings: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.predictions)


def _nearest(distances: np.ndarray) -> int:
    # np.argmin returns the first minimum: lowest class index wins ties
    return int(np.argmin(distances))


def _loo_distances(V: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """n x k distances from every column to the held-out centroids."""
    sizes = np.bincount(labels, minlength=k).astype(float)
    sums = np.stack([V[:, labels == i].sum(axis=1) for i in range(k)], axis=1)
    full = sums / np.where(sizes > 0, sizes, 1.0)
    D = np.stack([np.linalg.norm(V - full[:, i:i + 1], axis=0) for i in range(k)], axis=1)
    for j in range(V.shape[1]):
        i = labels[j]
        if sizes[i] > 1:
            own = (sums[:, i] - V[:, j]) / (sizes[i] - 1)
            D[j, i] = np.linalg.norm(V[:, j] - own)
        else:
            D[j, i] = np.inf
    return D


def loo_classify(M: TermDocMatrix, cfg: LooConfig = LooConfig(),
                 alias: Optional[AliasMap] = None) -> LooResult:
    classes = tuple(M.classes)
    k = len(classes)
    labels = M.labels()
    sizes = np.bincount(labels, minlength=k)
    notes = []
    singletons = [classes[i] for i in np.flatnonzero(sizes == 1)]
    if singletons:
        msg = (f"classes with a single document {singletons}: their held-out "
               "centroid is undefined and is never predicted for that document")
        notes.append(msg)
        warnings.warn(msg, stacklevel=2)
    if k < 2 and singletons:
        raise ValueError("a lone single-document class cannot be classified")

    if cfg.projection_mode == "none":
        D = _loo_distances(M.values, labels, k)
    elif cfg.projection_mode == "paper":
        proj = fit_projection(M, cfg.ell, cfg.rank_tol)
        notes.extend(proj.warnings)
        D = _loo_distances(project(M, proj).values, labels, k)
    else:
        D = _strict_distances(M, cfg, notes)

    predictions = []
    confusion = np.zeros((k, k), dtype=int)
    for j in range(M.values.shape[1]):
        p = _nearest(D[j])
        confusion[labels[j], p] += 1
        predictions.append(Prediction(M.doc_ids[j], classes[labels[j]], classes[p], D[j]))
    errors = sum(p.true != p.predicted for p in predictions)
    result = LooResult(predictions, classes, errors, confusion, errors,
                       list(dict.fromkeys(notes)))
    if alias is not None:
        result.adjusted_error_count = adjusted_errors(result, alias)
    return result


def _strict_distances(M: TermDocMatrix, cfg: LooConfig, notes: list) -> np.ndarray:
    classes = tuple(M.classes)
    k = len(classes)
    n = M.values.shape[1]
    D = np.full((n, k), np.inf)
    for j in range(n):
        rest = M.drop_column(j)
        fac = scatter_factors(rest, centroids(rest))
        proj = compute_projection(fac.H_b, fac.H_w, cfg.ell, cfg.rank_tol)
        notes.extend(proj.warnings)
        Y = proj.G.T @ rest.values
        y = proj.G.T @ M.values[:, j]
        rest_labels = rest.labels()
        for ci, name in enumerate(rest.classes):
            c = Y[:, rest_labels == ci].mean(axis=1)
            D[j, classes.index(name)] = np.linalg.norm(y - c)
    return D


def adjusted_errors(result: LooResult, alias: AliasMap) -> int:
    """Errors left after treating aliased author pairs as correct."""
    return sum(not alias.same(p.true, p.predicted) for p in result.predictions)


@dataclass
class SweepResult:
    err_full: int
    err_by_dim: dict          # ell -> error count, None when ell > m
    adj_full: int
    adj_by_dim: dict
    warnings: list = field(default_factory=list)


def sweep(M: TermDocMatrix, dims: Sequence[int], mode: str = "paper",
          rank_tol: float = 1e-12, alias: Optional[AliasMap] = None) -> SweepResult:
    """One full-dimension run plus one projected run per ``ell`` in ``dims``.

    An ``ell`` larger than the vocabulary size cannot be projected to; its
    cell is ``None`` and the reason is recorded in ``warnings``.
    """
    alias = alias or AliasMap()
    full = loo_classify(M, LooConfig("none"), alias)
    notes = list(full.warnings)
    err, adj = {}, {}
    m = M.values.shape[0]
    for ell in dims:
        if mode == "none":
            raise ValueError("sweep needs a projection mode")
        if ell > m:
            notes.append(f"ell={ell} exceeds vocabulary size {m}; not computed")
            err[ell] = adj[ell] = None
            continue
        r = loo_classify(M, LooConfig(mode, ell, rank_tol), alias)
        notes.extend(f"ell={ell}: {w}" for w in r.warnings if w not in full.warnings)
        err[ell], adj[ell] = r.error_count, r.adjusted_error_count
    return SweepResult(full.error_count, err, full.adjusted_error_count, adj,
                       list(dict.fromkeys(notes)))
