"""Weak- and strong-coupling limits of the dominant supracentrality eigenvector.

As ``omega -> 0+`` the layers decouple: the eigenvector concentrates on
the layers with the largest dominant eigenvalue, each carrying its own
Perron vector, weighted by the Perron vector of a ``T x T`` auxiliary
matrix.

As ``omega -> inf`` the joint centralities separate into a node profile
times the dominant right eigenvector of the coupling matrix; the node
profile is the Perron vector of a weighted time average of the layer
centrality matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _perron
from .coupling import is_strongly_connected
from .exceptions import DomainError, PreconditionError
from .temporal_net import is_strongly_connected_pattern

__all__ = [
    "LayerEigenpair",
    "WeakLimit",
    "StrongLimit",
    "weak_limit",
    "strong_limit",
    "stride_permutation",
    "sin_squared_weights",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayerEigenpair:
    value: float
    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class WeakLimit:
    """``omega -> 0+`` limit.

    ``P`` holds the (0-based) layers attaining the largest dominant
    eigenvalue, ``X`` the ``T x T`` auxiliary matrix (zero outside ``P``),
    ``alpha`` its Perron vector (zero outside ``P``, sums to one) and
    ``eigenvalue`` the Perron root of ``X`` restricted to ``P``.
    """

    P: tuple[int, ...]
    layer_eigs: tuple[LayerEigenpair, ...]
    X: np.ndarray
    alpha: np.ndarray
    eigenvalue: float
    limit_vector: np.ndarray

    @property
    def n_nodes(self):
        return self.layer_eigs[0].right.shape[0]

    @property
    def n_layers(self):
        return len(self.layer_eigs)


@dataclass(frozen=True)
class StrongLimit:
    """``omega -> inf`` limit.

    ``coupling_eigenvalue`` and ``left``/``right`` are the Perron data of the
    coupling matrix, ``X`` the weighted layer average and ``alpha`` its
    Perron vector. ``aggregate_eigenvalue`` is the Perron root of ``X``; the
    dominant eigenvalue of ``C(omega)`` behaves like
    ``omega * coupling_eigenvalue + aggregate_eigenvalue``.
    """

    coupling_eigenvalue: float
    left: np.ndarray
    right: np.ndarray
    X: np.ndarray
    alpha: np.ndarray
    aggregate_eigenvalue: float
    limit_vector: np.ndarray
    stride: np.ndarray

    @property
    def n_nodes(self):
        return self.alpha.shape[0]

    @property
    def n_layers(self):
        return self.right.shape[0]

    @property
    def joint(self):
        return np.outer(self.alpha, self.right)


def stride_permutation(N, T):
    """Stride permutation between node-major and layer-major orderings.

    Returns a 0-based integer array ``perm`` of length ``N*T`` with
    ``perm[k] = k // N + T * (k % N)``: layer-major position ``k`` (node
    ``k % N`` in layer ``k // N``) reads node-major position ``perm[k]``.
    Hence ``y[perm]`` reorders a node-major vector ``y`` to layer-major.
    """
    if N < 1 or T < 1:
        raise DomainError("N and T must be positive")
    k = np.arange(N * T)
    return k // N + T * (k % N)


def sin_squared_weights(T):
    """``sin^2(pi t / (T + 1))`` for ``t = 1..T``, normalized to sum to one."""
    if T < 1:
        raise DomainError("T must be at least 1")
    s = np.sin(np.pi * np.arange(1, T + 1) / (T + 1)) ** 2
    return s / s.sum()


def _layer_eigenpairs(layer_set, tie_rtol):
    pairs, simple = [], []
    for C in layer_set.matrices:
        r = _perron.perron_pair(C, tie_rtol=tie_rtol)
        l = _perron.perron_pair(C, left=True, tie_rtol=tie_rtol)
        pairs.append(LayerEigenpair(r.value, l.vector, r.vector))
        simple.append(r.simple)
    return pairs, simple


def weak_limit(layer_set, coupling, tie_rtol=_perron.TIE_RTOL):
    """Weak-coupling limit of the dominant right eigenvector.

    Layers whose dominant eigenvalue is within ``tie_rtol`` (relative) of the
    largest form ``P``. With ``u_t``, ``v_t`` the left and right Perron
    vectors of layer ``t``::

        X[t, s] = A~[t, s] <u_t, v_s> / <u_t, v_t>     for t, s in P

    The limit vector has block ``t`` equal to ``alpha_t v_t``.

    Raises
    ------
    PreconditionError
        Coupling not strongly connected, a layer in ``P`` with a repeated
        dominant eigenvalue, or ``X`` restricted to ``P`` reducible.
    """
    if coupling.n_layers != layer_set.n_layers:
        raise DomainError("coupling and layer set disagree on T")
    if not is_strongly_connected(coupling):
        raise PreconditionError("interlayer coupling graph is not strongly connected")
    pairs, simple = _layer_eigenpairs(layer_set, tie_rtol)
    mus = np.array([p.value for p in pairs])
    top = mus.max()
    P = tuple(int(t) for t in np.flatnonzero(np.abs(mus - top) <= tie_rtol * max(abs(top), 1e-300)))
    bad = [t for t in P if simple[t] is False]
    if bad:
        raise PreconditionError(f"dominant eigenvalue of layer(s) {bad} is not simple")

    T = layer_set.n_layers
    X = np.zeros((T, T))
    idx = np.array(P)
    for t in P:
        u = pairs[t].left
        denom = u @ pairs[t].right
        for s in P:
            X[t, s] = coupling.matrix[t, s] * (u @ pairs[s].right) / denom
    XP = X[np.ix_(idx, idx)]
    if not is_strongly_connected_pattern(XP):
        raise PreconditionError("weak-limit matrix restricted to the top layers is reducible")
    xp = _perron.perron_pair(XP, tie_rtol=tie_rtol)
    alpha = np.zeros(T)
    alpha[idx] = xp.vector

    N = layer_set.n_nodes
    v = np.zeros((T, N))
    for t in P:
        v[t] = alpha[t] * pairs[t].right
    v = v.reshape(-1)
    v /= v.sum()
    return WeakLimit(P, tuple(pairs), X, alpha, xp.value, v)


def strong_limit(layer_set, coupling, tie_rtol=_perron.TIE_RTOL):
    """Strong-coupling limit of the dominant right eigenvector.

    With ``u``, ``v`` the left and right Perron vectors of the coupling
    matrix, the layers are averaged with weights ``u_t v_t / <u, v>``; the
    Perron vector ``alpha`` of that average gives ``W[i, t] = alpha_i v_t``.

    Raises
    ------
    PreconditionError
        Coupling not strongly connected or its dominant eigenvalue repeated.
    """
    if coupling.n_layers != layer_set.n_layers:
        raise DomainError("coupling and layer set disagree on T")
    if not is_strongly_connected(coupling):
        raise PreconditionError("interlayer coupling graph is not strongly connected")
    A = coupling.matrix
    right = _perron.perron_pair(A, tie_rtol=tie_rtol)
    left = _perron.perron_pair(A, left=True, tie_rtol=tie_rtol)
    if right.simple is False:
        raise PreconditionError("dominant eigenvalue of the coupling matrix is not simple")
    weights = left.vector * right.vector
    weights = weights / weights.sum()

    X = layer_set.weighted_sum(weights)
    agg = _perron.perron_pair(X, tie_rtol=tie_rtol)
    if abs(agg.value - right.value) > 1e-6:
        log.warning("Perron root of the aggregated layer matrix (%.12g) differs from the "
                    "coupling eigenvalue (%.12g)", agg.value, right.value)

    N, T = layer_set.n_nodes, layer_set.n_layers
    stride = stride_permutation(N, T)
    node_major = np.kron(agg.vector, right.vector)
    limit = node_major[stride]
    limit = limit / limit.sum()
    X_out = _perron.as_array(X) if N <= _perron.DENSE_MAX else X
    return StrongLimit(right.value, left.vector, right.vector, X_out, agg.vector,
                       agg.value, limit, stride)
