"""Interlayer-adjacency matrices coupling the time layers."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DomainError, ParseError
from .temporal_net import is_strongly_connected_pattern

__all__ = [
    "TOPOLOGIES",
    "InterlayerCoupling",
    "undirected_chain",
    "directed_chain_teleport",
    "reverse",
    "load_custom",
    "read_custom",
    "is_strongly_connected",
]

TOPOLOGIES = ("undirected_chain", "directed_chain_teleport",
              "reversed_directed_chain_teleport", "custom")

_REVERSED = {
    "directed_chain_teleport": "reversed_directed_chain_teleport",
    "reversed_directed_chain_teleport": "directed_chain_teleport",
}


@dataclass(frozen=True, eq=False)
class InterlayerCoupling:
    """A ``T x T`` nonnegative interlayer-adjacency matrix with its topology tag."""

    matrix: np.ndarray
    topology: str = "custom"
    gamma: float | None = None

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise DomainError(f"unknown topology {self.topology!r}")
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DomainError(f"coupling matrix must be square and nonempty, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("coupling matrix has non-finite entries")
        if m.min() < 0:
            raise DomainError("coupling matrix has negative entries")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_layers(self):
        return self.matrix.shape[0]

    def __eq__(self, other):
        if not isinstance(other, InterlayerCoupling):
            return NotImplemented
        return (self.topology == other.topology and self.gamma == other.gamma
                and np.array_equal(self.matrix, other.matrix))

    __hash__ = None


def undirected_chain(T):
    """Nearest-neighbour chain: entry ``(t, t')`` is 1 iff ``|t - t'| == 1``."""
    if T < 1:
        raise DomainError("T must be at least 1")
    m = np.zeros((T, T))
    idx = np.arange(T - 1)
    m[idx, idx + 1] = 1.0
    m[idx + 1, idx] = 1.0
    return InterlayerCoupling(m, "undirected_chain")


def directed_chain_teleport(T, gamma):
    """Forward chain with layer teleportation.

    Every entry is ``gamma`` (the diagonal included) except the
    superdiagonal ``t' = t + 1``, which is ``1 + gamma``.
    """
    if T < 1:
        raise DomainError("T must be at least 1")
    if not (gamma > 0 and np.isfinite(gamma)):
        raise DomainError(f"gamma must be positive and finite, got {gamma}")
    m = np.full((T, T), float(gamma))
    idx = np.arange(T - 1)
    m[idx, idx + 1] += 1.0
    return InterlayerCoupling(m, "directed_chain_teleport", float(gamma))


def reverse(c):
    """Transpose the coupling so that a directed chain points backwards in time."""
    return InterlayerCoupling(c.matrix.T.copy(), _REVERSED.get(c.topology, c.topology), c.gamma)


def load_custom(matrix):
    """Wrap an arbitrary square nonnegative matrix as a ``custom`` coupling."""
    return InterlayerCoupling(np.asarray(matrix, dtype=np.float64), "custom")


def read_custom(path):
    """Read a custom coupling from JSON (nested list) or CSV (``T`` rows of ``T`` reals)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8-sig")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON coupling: {exc.msg}", exc.lineno) from None
        return load_custom(data)
    rows = []
    for no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        try:
            rows.append([float(x) for x in row])
        except ValueError:
            raise ParseError("non-numeric coupling entry", no) from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DomainError("coupling CSV must hold T rows of T values")
    return load_custom(rows)


def is_strongly_connected(c):
    """True iff the directed graph with adjacency ``c.matrix`` is strongly connected."""
    return is_strongly_connected_pattern(c.matrix)
