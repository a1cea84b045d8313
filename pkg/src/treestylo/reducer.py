"""Cluster-structure-preserving dimension reduction.

The reduction picks ``G`` (m x l) to maximize

    J1(G) = trace((G' Sw G)^-1 (G' Sb G))

where ``Sw``/``Sb`` are the within- and between-class scatter matrices.
``Sw`` is singular whenever the feature dimension m exceeds the number of
documents, so the scatter matrices are never formed. The algorithm works on
their factors ``Hw`` (m x n) and ``Hb`` (m x k), which satisfy
``Sw = Hw Hw'`` and ``Sb = Hb Hb'``, through a generalized SVD of the pair
(Hb', Hw').
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import TermDocMatrix

#: Messages printed by the reference algorithm when more columns are
#: requested than the data supports.
WARN_EXCEEDS_RANK = ("Number of columns of G requested exceeds number of nontrivial "
                     "singular values pairs of H_b^T and H_w^T")
WARN_EXCEEDS_COLUMNS = "And it exceeds the number of columns of G"


class NumericalError(ArithmeticError):
    """The data admit no reduction (e.g. every document vector is identical)."""


@dataclass
class Centroids:
    per_class: np.ndarray   # m x k, column i is the centroid of class i
    overall: np.ndarray     # m
    sizes: np.ndarray       # k


@dataclass
class ScatterFactors:
    H_w: np.ndarray
    H_b: np.ndarray
    H_m: np.ndarray


@dataclass
class ProjectionMatrix:
    G: np.ndarray
    t: int
    warnings: list = field(default_factory=list)

    @property
    def ell(self) -> int:
        return self.G.shape[1]


def centroids(M: TermDocMatrix) -> Centroids:
    labels = M.labels()
    k = len(M.classes)
    sizes = np.bincount(labels, minlength=k)
    if (sizes == 0).any():
        empty = [M.classes[i] for i in np.flatnonzero(sizes == 0)]
        raise ValueError(f"classes without documents: {empty}")
    V = M.values
    per_class = np.stack([V[:, labels == i].mean(axis=1) for i in range(k)], axis=1)
    return Centroids(per_class, V.mean(axis=1), sizes)


def scatter_factors(M: TermDocMatrix, cen: Centroids) -> ScatterFactors:
    labels = M.labels()
    V = M.values
    H_w = V - cen.per_class[:, labels]
    H_b = np.sqrt(cen.sizes)[None, :] * (cen.per_class - cen.overall[:, None])
    H_m = V - cen.overall[:, None]
    return ScatterFactors(H_w, H_b, H_m)


def compute_projection(H_b: np.ndarray, H_w: np.ndarray, ell: int,
                       rank_tol: float = 1e-12) -> ProjectionMatrix:
    """The structure-preserving, dimension-reducing ``G``.

    1. ``K = [Hb'; Hw']`` has SVD ``P diag(R) Q'``; ``t`` counts singular
       values above ``rank_tol`` times the largest.
    2. SVD of the k x t block ``P[:k, :t] = U S W'``.
    3. ``G = Q[:, :t] R^-1 W[:, :ell]``. If ``ell > t`` a warning is
       recorded and columns ``t..ell`` are taken from ``Q`` itself, unless
       ``ell`` also exceeds n, in which case they stay zero.

    Only the thin SVD of K is taken, so nothing of size m x m is formed.
    """
    H_b = np.asarray(H_b, dtype=float)
    H_w = np.asarray(H_w, dtype=float)
    m, k = H_b.shape
    if H_w.shape[0] != m:
        raise ValueError(f"H_b has {m} rows but H_w has {H_w.shape[0]}")
    n = H_w.shape[1]
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell > m:
        raise ValueError(f"ell={ell} exceeds the feature dimension m={m}")
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")

    K = np.vstack([H_b.T, H_w.T])
    if not np.isfinite(K).all():
        raise NumericalError("non-finite entries in the scatter factors")
    P, R, Qt = np.linalg.svd(K, full_matrices=False)
    if R.size == 0 or R[0] == 0.0:
        raise NumericalError("K is all zero: the documents show no variation")
    t = int(np.count_nonzero(R > rank_tol * R[0]))
    Q = Qt.T

    _, _, Wt = np.linalg.svd(P[:k, :t], full_matrices=True)
    W = Wt.T
    X = Q[:, :t] / R[:t]

    G = np.zeros((m, ell))
    notes = []
    if ell <= t:
        G[:] = X @ W[:, :ell]
    else:
        notes.append(WARN_EXCEEDS_RANK)
        G[:, :t] = X @ W
        if ell > n:
            notes.append(WARN_EXCEEDS_COLUMNS)
        else:
            G[:, t:ell] = Q[:, t:ell]
    return ProjectionMatrix(G, t, notes)


def fit_projection(M: TermDocMatrix, ell: int, rank_tol: float = 1e-12) -> ProjectionMatrix:
    fac = scatter_factors(M, centroids(M))
    return compute_projection(fac.H_b, fac.H_w, ell, rank_tol)


def project(M: TermDocMatrix, proj: ProjectionMatrix) -> TermDocMatrix:
    G = proj.G if isinstance(proj, ProjectionMatrix) else np.asarray(proj)
    if M.values.shape[0] != G.shape[0]:
        raise ValueError(f"matrix has {M.values.shape[0]} rows, G expects {G.shape[0]}")
    Y = G.T @ M.values
    return M.with_values(Y, row_keys=[f"dim{i + 1}" for i in range(G.shape[1])])


def j1(G: np.ndarray, S_w: np.ndarray, S_b: np.ndarray) -> float:
    """``trace((G' Sw G)^-1 (G' Sb G))`` for small dense scatter matrices."""
    A = G.T @ S_w @ G
    B = G.T @ S_b @ G
    return float(np.trace(np.linalg.solve(A, B)))
