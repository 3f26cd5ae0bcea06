"""Discrete-time temporal networks on a common node set.

A :class:`TemporalNetwork` is an ordered sequence of ``T`` sparse ``N x N``
adjacency matrices together with the node labels and the layer keys
(typically years). Entry ``(i, j)`` of layer ``t`` is the weight of the
directed edge ``i -> j`` in that layer.

Edge lists are read from delimited text with the header
``layer,src,dst[,weight]``. Nodes that do not take part in a layer are
padded in with empty rows and columns so that every layer has the same
dimension.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .exceptions import DomainError, ParseError

__all__ = [
    "NodeRegistry",
    "TemporalNetwork",
    "IngestOptions",
    "ValidationReport",
    "load_edge_list",
    "read_edge_list",
    "to_edge_rows",
    "write_edge_list",
    "aggregate",
    "validate",
    "is_strongly_connected_pattern",
]


@dataclass(frozen=True)
class NodeRegistry:
    """Ordered, unique node labels and the reverse lookup ``label -> index``."""

    labels: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise DomainError("node labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "index", index)

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, label):
        return self.index[label]

    def __contains__(self, label):
        return label in self.index


@dataclass(frozen=True)
class TemporalNetwork:
    """A sequence of intralayer adjacency matrices over a shared node set.

    Layers are stored as CSR matrices with float64 weights. The object is
    immutable after construction; the layer matrices are copied and their
    buffers flagged read-only.
    """

    registry: NodeRegistry
    layers: tuple[sp.csr_matrix, ...]
    layer_keys: tuple

    def __post_init__(self):
        n = len(self.registry)
        if len(self.layers) == 0:
            raise DomainError("a temporal network needs at least one layer")
        if len(self.layers) != len(self.layer_keys):
            raise DomainError("need exactly one key per layer")
        frozen = []
        for t, layer in enumerate(self.layers):
            mat = sp.csr_matrix(layer, dtype=np.float64, copy=True)
            if mat.shape != (n, n):
                raise DomainError(f"layer {t} has shape {mat.shape}, expected {(n, n)}")
            mat.sum_duplicates()
            mat.eliminate_zeros()
            if mat.nnz and (not np.all(np.isfinite(mat.data)) or mat.data.min() < 0):
                raise DomainError(f"layer {t} has negative or non-finite weights")
            for buf in (mat.data, mat.indices, mat.indptr):
                buf.flags.writeable = False
            frozen.append(mat)
        keys = tuple(self.layer_keys)
        if any(not (a < b) for a, b in zip(keys, keys[1:])):
            raise DomainError("layer keys must be strictly increasing")
        object.__setattr__(self, "layers", tuple(frozen))
        object.__setattr__(self, "layer_keys", keys)

    @property
    def n_nodes(self):
        return len(self.registry)

    @property
    def n_layers(self):
        return len(self.layers)

    @property
    def labels(self):
        return self.registry.labels

    @classmethod
    def from_dense(cls, layers, labels=None, layer_keys=None):
        """Build a network from a stack of dense ``N x N`` arrays."""
        layers = [np.asarray(a, dtype=np.float64) for a in layers]
        if not layers:
            raise DomainError("a temporal network needs at least one layer")
        n = layers[0].shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        if layer_keys is None:
            layer_keys = list(range(1, len(layers) + 1))
        return cls(NodeRegistry(tuple(labels)), tuple(sp.csr_matrix(a) for a in layers),
                   tuple(layer_keys))

    def dense_layers(self):
        """Return the layers as a ``(T, N, N)`` array."""
        return np.stack([layer.toarray() for layer in self.layers])

    def relabel(self, perm):
        """Return the network with node ``i`` moved to position ``perm[i]``."""
        perm = np.asarray(perm)
        n = self.n_nodes
        if sorted(perm.tolist()) != list(range(n)):
            raise DomainError("perm must be a permutation of range(N)")
        P = sp.csr_matrix((np.ones(n), (perm, np.arange(n))), shape=(n, n))
        labels = [None] * n
        for i, lab in enumerate(self.labels):
            labels[perm[i]] = lab
        layers = tuple(P @ layer @ P.T for layer in self.layers)
        return TemporalNetwork(NodeRegistry(tuple(labels)), layers, self.layer_keys)


@dataclass(frozen=True)
class IngestOptions:
    """Edge-list parsing options.

    ``duplicates`` is ``"sum"`` (default) or ``"error"``. With
    ``fill_missing_layers`` integer layer keys are made contiguous by
    inserting empty layers for the missing keys.
    """

    delimiter: str = ","
    duplicates: str = "sum"
    fill_missing_layers: bool = False

    def __post_init__(self):
        if self.duplicates not in ("sum", "error"):
            raise DomainError(f"unknown duplicate policy {self.duplicates!r}")
        if len(self.delimiter) != 1:
            raise DomainError("delimiter must be a single character")


def _key_sort(raw_keys):
    """Convert raw layer keys to their natural type: int, then float, then str."""
    for conv in (int, float):
        try:
            converted = {k: conv(k) for k in raw_keys}
        except ValueError:
            continue
        if conv is float and any(not math.isfinite(v) for v in converted.values()):
            break
        if len(set(converted.values())) != len(converted):
            raise DomainError("distinct layer keys collapse to the same value")
        return converted
    return {k: k for k in raw_keys}


def load_edge_list(source, options=None):
    """Parse an edge list into a :class:`TemporalNetwork`.

    Parameters
    ----------
    source : bytes, str or binary file object
        UTF-8 text with a ``layer,src,dst[,weight]`` header. Lines whose first
        non-blank character is ``#`` and blank lines are skipped.
    options : IngestOptions, optional

    Returns
    -------
    TemporalNetwork
        Nodes are the union of all labels in sorted order, layers are sorted
        by key. Duplicate ``(layer, src, dst)`` rows are summed unless the
        options ask for an error.
    """
    options = options or IngestOptions()
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8-sig")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8-sig") if isinstance(raw, (bytes, bytearray)) else raw

    lines = [(no, line) for no, line in enumerate(text.splitlines(), start=1)
             if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise DomainError("edge list is empty")

    header_no, header_line = lines[0]
    header = [h.strip().lower() for h in next(csv.reader([header_line], delimiter=options.delimiter))]
    if header[:3] != ["layer", "src", "dst"] or header[3:] not in ([], ["weight"]):
        raise ParseError(f"expected header layer,src,dst[,weight], got {header_line!r}", header_no)
    has_weight = len(header) == 4

    edges = {}
    nodes = set()
    raw_keys = set()
    for no, line in lines[1:]:
        row = [c.strip() for c in next(csv.reader([line], delimiter=options.delimiter))]
        if len(row) == 3 or (has_weight and len(row) == 4 and row[3] == ""):
            weight = 1.0
        elif has_weight and len(row) == 4:
            try:
                weight = float(row[3])
            except ValueError:
                raise ParseError(f"weight {row[3]!r} is not a number", no) from None
        else:
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", no)
        layer, src, dst = row[:3]
        if not layer or not src or not dst:
            raise ParseError("empty layer, src or dst field", no)
        if not math.isfinite(weight):
            raise ParseError(f"weight {row[3]!r} is not finite", no)
        if weight < 0:
            raise DomainError(f"line {no}: negative weight {weight}")
        key = (layer, src, dst)
        if key in edges:
            if options.duplicates == "error":
                raise ParseError(f"duplicate edge {src}->{dst} in layer {layer}", no)
            edges[key] += weight
        else:
            edges[key] = weight
        nodes.update((src, dst))
        raw_keys.add(layer)

    if not edges:
        raise DomainError("edge list has a header but no edges")

    keymap = _key_sort(raw_keys)
    keys = sorted(set(keymap.values()))
    if options.fill_missing_layers:
        if not all(isinstance(k, int) for k in keys):
            raise DomainError("fill_missing_layers needs integer layer keys")
        keys = list(range(keys[0], keys[-1] + 1))
    layer_pos = {k: t for t, k in enumerate(keys)}

    registry = NodeRegistry(tuple(sorted(nodes)))
    n = len(registry)
    rows = [[] for _ in keys]
    cols = [[] for _ in keys]
    vals = [[] for _ in keys]
    for (layer, src, dst), w in edges.items():
        t = layer_pos[keymap[layer]]
        rows[t].append(registry.index[src])
        cols[t].append(registry.index[dst])
        vals[t].append(w)
    layers = tuple(
        sp.csr_matrix((np.asarray(v, dtype=np.float64), (np.asarray(r, dtype=np.intp),
                                                          np.asarray(c, dtype=np.intp))),
                      shape=(n, n))
        for r, c, v in zip(rows, cols, vals)
    )
    return TemporalNetwork(registry, layers, tuple(keys))


def read_edge_list(path, options=None):
    """Read an edge-list file from ``path``."""
    with open(path, "rb") as fh:
        return load_edge_list(fh, options)


def to_edge_rows(net):
    """Yield ``(layer_key, src, dst, weight)`` for every stored edge.

    Zero-weight rows are emitted for nodes that carry no edge in any layer,
    so that reloading the rows recovers the same node set.
    """
    seen = np.zeros(net.n_nodes, dtype=bool)
    for key, layer in zip(net.layer_keys, net.layers):
        coo = layer.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            i, j = int(coo.row[k]), int(coo.col[k])
            seen[i] = seen[j] = True
            yield key, net.labels[i], net.labels[j], float(coo.data[k])
    for i in np.flatnonzero(~seen):
        lab = net.labels[i]
        yield net.layer_keys[0], lab, lab, 0.0


def write_edge_list(net, fh=None, delimiter=","):
    """Serialize ``net`` as edge-list text; returns the text if ``fh`` is None."""
    buf = io.StringIO() if fh is None else fh
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["layer", "src", "dst", "weight"])
    for key, src, dst, w in to_edge_rows(net):
        writer.writerow([key, src, dst, repr(w)])
    if fh is None:
        return buf.getvalue()
    return None


def aggregate(net):
    """Temporally aggregated adjacency matrix, the sum of all layers (CSR)."""
    total = sp.csr_matrix((net.n_nodes, net.n_nodes), dtype=np.float64)
    for layer in net.layers:
        total = total + layer
    return total


def is_strongly_connected_pattern(M):
    """True iff the directed graph on the nonzero pattern of ``M`` is strongly connected.

    A 1 x 1 matrix counts as strongly connected whatever its entry.
    """
    M = sp.csr_matrix(M)
    if M.shape[0] <= 1:
        return True
    ncomp, _ = connected_components(M, directed=True, connection="strong")
    return ncomp == 1


@dataclass(frozen=True)
class ValidationReport:
    edge_counts: tuple[int, ...]
    zero_out_degree_counts: tuple[int, ...]
    self_loop_counts: tuple[int, ...]
    aggregate_strongly_connected: bool

    @property
    def has_dangling(self):
        return any(self.zero_out_degree_counts)


def validate(net):
    """Summarize per-layer structure and connectivity of the aggregate.

    Never raises; the connectivity flag is what the irreducibility
    precondition needs when layers are not PageRank matrices.
    """
    edges, dangling, loops = [], [], []
    for layer in net.layers:
        edges.append(int(layer.nnz))
        outdeg = np.asarray(layer.sum(axis=1)).ravel()
        dangling.append(int(np.count_nonzero(outdeg == 0)))
        loops.append(int(np.count_nonzero(layer.diagonal())))
    return ValidationReport(tuple(edges), tuple(dangling), tuple(loops),
                            is_strongly_connected_pattern(aggregate(net)))
