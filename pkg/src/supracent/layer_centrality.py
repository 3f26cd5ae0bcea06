"""Per-layer centrality matrices ``C(A)`` for eigenvector-based centralities.

Supported kinds are PageRank (Google matrix, right-eigenvector convention),
plain eigenvector centrality (``C = A``), hubs (``C = A A^T``) and
authorities (``C = A^T A``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import DanglingNodeError, DomainError

__all__ = [
    "KINDS",
    "DANGLING_POLICIES",
    "LayerCentralityKind",
    "LayerCentralitySet",
    "PageRankMatrix",
    "pagerank_matrix",
    "eigenvector_matrix",
    "hub_matrix",
    "authority_matrix",
    "build_layer_set",
    "DENSE_THRESHOLD",
]

KINDS = ("pagerank", "eigenvector", "hub", "authority")
DANGLING_POLICIES = ("uniform", "self_loop", "error")
DENSE_THRESHOLD = 2048


@dataclass(frozen=True)
class LayerCentralityKind:
    kind: str = "pagerank"
    sigma: float = 0.85
    dangling: str = "uniform"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown centrality kind {self.kind!r}; expected one of {KINDS}")
        if self.dangling not in DANGLING_POLICIES:
            raise DomainError(f"unknown dangling policy {self.dangling!r}")
        if self.kind == "pagerank" and not (0.0 < self.sigma < 1.0):
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma}")


class PageRankMatrix:
    """Google matrix held as ``S + 1 c^T`` with ``S`` sparse.

    ``S`` is ``sigma A^T D^{-1}`` restricted to nodes with outgoing edges and
    ``c`` collects the uniform teleportation and the uniform dangling
    columns, so the dense rank-one part is never materialized.
    """

    def __init__(self, transition, teleport):
        self.transition = sp.csr_matrix(transition, dtype=np.float64)
        self.teleport = np.asarray(teleport, dtype=np.float64)
        n = self.teleport.shape[0]
        if self.transition.shape != (n, n):
            raise DomainError("transition and teleport sizes disagree")
        self.shape = (n, n)
        self.dtype = np.dtype(np.float64)

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.transition @ x + np.ones(self.shape[0]) * (self.teleport @ x)

    def rmatvec(self, y):
        y = np.asarray(y, dtype=np.float64)
        return self.transition.T @ y + self.teleport * y.sum()

    def matmat(self, X):
        X = np.asarray(X, dtype=np.float64)
        return self.transition @ X + np.outer(np.ones(self.shape[0]), self.teleport @ X)

    def __matmul__(self, x):
        x = np.asarray(x)
        return self.matvec(x) if x.ndim == 1 else self.matmat(x)

    def toarray(self):
        return self.transition.toarray() + self.teleport[None, :]

    def scaled(self, c):
        return PageRankMatrix(self.transition * c, self.teleport * c)

    def __add__(self, other):
        if isinstance(other, PageRankMatrix):
            return PageRankMatrix(self.transition + other.transition,
                                  self.teleport + other.teleport)
        return NotImplemented

    def column_sums(self):
        return np.asarray(self.transition.sum(axis=0)).ravel() + self.shape[0] * self.teleport


def _check_square_nonneg(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"adjacency must be square, got shape {A.shape}")
    data = A.data if sp.issparse(A) else A
    if data.size and (not np.all(np.isfinite(data)) or data.min() < 0):
        raise DomainError("adjacency must be nonnegative and finite")


def pagerank_matrix(A, sigma=0.85, dangling="uniform", dense_threshold=DENSE_THRESHOLD):
    """Google matrix ``sigma A^T D^{-1} + (1 - sigma)/N 1 1^T``.

    ``D`` holds the out-degrees (row sums of ``A``). Columns of zero
    out-degree nodes follow ``dangling``: ``"uniform"`` uses ``1/N``,
    ``"self_loop"`` sets ``A_ii = 1`` first, ``"error"`` raises
    :class:`DanglingNodeError`.

    Returns a dense array when ``N <= dense_threshold``, otherwise a
    :class:`PageRankMatrix`. Either way every column sums to one.
    """
    if not (0.0 < sigma < 1.0):
        raise DomainError(f"sigma must lie in (0, 1), got {sigma}")
    if dangling not in DANGLING_POLICIES:
        raise DomainError(f"unknown dangling policy {dangling!r}")
    A = sp.csr_matrix(A, dtype=np.float64)
    _check_square_nonneg(A)
    n = A.shape[0]
    outdeg = np.asarray(A.sum(axis=1)).ravel()
    is_dangling = outdeg == 0
    if is_dangling.any():
        if dangling == "error":
            raise DanglingNodeError(
                f"{int(is_dangling.sum())} node(s) have zero out-degree "
                f"(first at index {int(np.flatnonzero(is_dangling)[0])})")
        if dangling == "self_loop":
            idx = np.flatnonzero(is_dangling)
            A = (A + sp.csr_matrix((np.ones(idx.size), (idx, idx)), shape=(n, n))).tocsr()
            outdeg = np.asarray(A.sum(axis=1)).ravel()
            is_dangling = outdeg == 0

    # divide entries by their row sum directly; 1/outdeg overflows for subnormal weights
    A = A.copy()
    A.sum_duplicates()
    rows = np.repeat(np.arange(n), np.diff(A.indptr))
    A.data = A.data / outdeg[rows]
    transition = sigma * A.T.tocsr()
    teleport = np.full(n, (1.0 - sigma) / n)
    teleport[is_dangling] = 1.0 / n

    if n <= dense_threshold:
        C = transition.toarray() + teleport[None, :]
        # renormalize columns so stochasticity holds to rounding
        return C / C.sum(axis=0, keepdims=True)
    return PageRankMatrix(transition, teleport)


def eigenvector_matrix(A):
    """Centrality matrix of eigenvector centrality, ``A`` itself."""
    return A


def hub_matrix(A):
    """Hub centrality matrix ``A A^T``."""
    _check_square_nonneg(A)
    return A @ A.T


def authority_matrix(A):
    """Authority centrality matrix ``A^T A``."""
    _check_square_nonneg(A)
    return A.T @ A


@dataclass(frozen=True)
class LayerCentralitySet:
    """The ``T`` centrality matrices of a temporal network plus their kind.

    Matrices are dense arrays, CSR matrices, or :class:`PageRankMatrix`
    objects; all expose ``@`` and ``toarray`` (dense ones via ``np.asarray``).
    """

    kind: LayerCentralityKind
    matrices: tuple

    @property
    def n_layers(self):
        return len(self.matrices)

    @property
    def n_nodes(self):
        return self.matrices[0].shape[0]

    def dense(self):
        """Return the matrices as a ``(T, N, N)`` float64 array."""
        from ._perron import as_array
        return np.stack([as_array(C) for C in self.matrices])

    @property
    def all_dense(self):
        return all(isinstance(C, np.ndarray) for C in self.matrices)

    def weighted_sum(self, weights):
        """``sum_t w_t C^(t)`` in the representation of the inputs."""
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (self.n_layers,):
            raise DomainError("need one weight per layer")
        if all(isinstance(C, PageRankMatrix) for C in self.matrices):
            total = self.matrices[0].scaled(weights[0])
            for w, C in zip(weights[1:], self.matrices[1:]):
                total = total + C.scaled(w)
            return total
        if self.all_dense:
            return np.tensordot(weights, np.stack(self.matrices), axes=1)
        total = None
        for w, C in zip(weights, self.matrices):
            term = C.toarray() * w if isinstance(C, PageRankMatrix) else C * w
            total = term if total is None else total + term
        return sp.csr_matrix(total) if sp.issparse(total) else np.asarray(total)

    def is_nonnegative(self):
        for C in self.matrices:
            if isinstance(C, PageRankMatrix):
                data = np.concatenate([C.transition.data, C.teleport])
            elif sp.issparse(C):
                data = C.data
            else:
                data = np.asarray(C).ravel()
            if data.size and (not np.all(np.isfinite(data)) or data.min() < 0):
                return False
        return True

    def sum_pattern(self):
        """Sparse nonzero pattern of ``sum_t C^(t)``; PageRank layers are positive."""
        n = self.n_nodes
        total = sp.csr_matrix((n, n))
        for C in self.matrices:
            if isinstance(C, PageRankMatrix):
                if np.all(C.teleport > 0):
                    return sp.csr_matrix(np.ones((n, n)))
                total = total + sp.csr_matrix(C.toarray())
            else:
                total = total + sp.csr_matrix(np.abs(C) if not sp.issparse(C) else abs(C))
        return total


_CONSTRUCTORS = {
    "eigenvector": eigenvector_matrix,
    "hub": hub_matrix,
    "authority": authority_matrix,
}


def build_layer_set(net, kind=None, dense_threshold=DENSE_THRESHOLD):
    """Apply the centrality constructor of ``kind`` to every layer of ``net``."""
    kind = kind or LayerCentralityKind()
    if kind.kind == "pagerank":
        mats = tuple(pagerank_matrix(A, kind.sigma, kind.dangling, dense_threshold)
                     for A in net.layers)
    else:
        build = _CONSTRUCTORS[kind.kind]
        mats = []
        for A in net.layers:
            C = sp.csr_matrix(build(A), dtype=np.float64)
            mats.append(C.toarray() if C.shape[0] <= dense_threshold else C)
        mats = tuple(mats)
    return LayerCentralitySet(kind, mats)
