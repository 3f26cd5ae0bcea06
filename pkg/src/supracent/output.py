"""Tabular serialization of centrality results (CSV and JSON)."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .asymptotics import StrongLimit, WeakLimit
from .exceptions import DomainError
from .supracentrality import CentralityResult, extract

__all__ = ["OUTPUTS", "FORMATS", "as_centrality_result", "emit", "format_float", "write_atomic"]

OUTPUTS = ("joint", "mlc", "mnc", "cond_node", "cond_layer", "eigenvalue")
FORMATS = ("csv", "json")


def format_float(x):
    """17 significant digits, enough to round-trip any float64."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def as_centrality_result(result):
    """View a limit object as a :class:`CentralityResult` (zeros allowed)."""
    if isinstance(result, CentralityResult):
        return result
    if isinstance(result, WeakLimit):
        return extract(result.limit_vector, result.eigenvalue, result.n_nodes,
                       result.n_layers, strict=False, method="weak")
    if isinstance(result, StrongLimit):
        return extract(result.limit_vector, result.coupling_eigenvalue, result.n_nodes,
                       result.n_layers, strict=False, method="strong")
    raise DomainError(f"cannot emit object of type {type(result).__name__}")


def _scalars(result):
    if isinstance(result, WeakLimit):
        return [("weak_eigenvalue", result.eigenvalue)]
    if isinstance(result, StrongLimit):
        return [("coupling_eigenvalue", result.coupling_eigenvalue),
                ("aggregate_eigenvalue", result.aggregate_eigenvalue)]
    return [("lambda_max", result.eigenvalue), ("iterations", result.iterations),
            ("residual", result.residual)]


def _json_value(x):
    if isinstance(x, (np.integer, int)):
        return int(x)
    x = float(x)
    return None if math.isnan(x) else x


def _json_key(k):
    if isinstance(k, (np.integer,)):
        return int(k)
    if isinstance(k, (np.floating,)):
        return float(k)
    return k


def emit(result, output, fmt, labels, layer_keys, nodes=None):
    """Serialize one output table of ``result``.

    Parameters
    ----------
    result : CentralityResult, WeakLimit or StrongLimit
    output : one of ``OUTPUTS``
    fmt : ``"csv"`` or ``"json"``
    labels, layer_keys : sequences naming the rows and columns
    nodes : iterable of labels, optional
        Restrict node-indexed outputs to these nodes (in the given order).

    Returns
    -------
    bytes
        CSV rows ``node,layer,value`` for the ``N x T`` tables, ``layer,value``
        for ``mlc``, ``node,value`` for ``mnc`` and ``name,value`` for
        ``eigenvalue``. JSON holds the node and layer keys and the values
        under the field name of the output.
    """
    if output not in OUTPUTS:
        raise DomainError(f"unknown output {output!r}")
    if fmt not in FORMATS:
        raise DomainError(f"unknown format {fmt!r}")
    labels = list(labels)
    layer_keys = [_json_key(k) for k in layer_keys]
    if nodes is None:
        rows = list(range(len(labels)))
    else:
        pos = {lab: i for i, lab in enumerate(labels)}
        missing = [n for n in nodes if n not in pos]
        if missing:
            raise DomainError(f"unknown node label(s): {', '.join(map(str, missing))}")
        rows = [pos[n] for n in nodes]

    if output == "eigenvalue":
        pairs = _scalars(result)
        if fmt == "json":
            return _dumps({name: _json_value(v) for name, v in pairs})
        return _csv([("name", "value")] + [(name, format_float(v) if isinstance(v, float)
                                           else str(v)) for name, v in pairs])

    res = as_centrality_result(result)
    values = getattr(res, output)
    node_labels = [labels[i] for i in rows]
    if output == "mlc":
        if fmt == "json":
            return _dumps({"layers": layer_keys, "mlc": [_json_value(x) for x in values]})
        return _csv([("layer", "value")]
                    + [(k, format_float(x)) for k, x in zip(layer_keys, values)])
    if output == "mnc":
        if fmt == "json":
            return _dumps({"nodes": node_labels, "mnc": [_json_value(values[i]) for i in rows]})
        return _csv([("node", "value")] + [(labels[i], format_float(values[i])) for i in rows])
    if fmt == "json":
        return _dumps({"nodes": node_labels, "layers": layer_keys,
                       output: [[_json_value(x) for x in values[i]] for i in rows]})
    out = [("node", "layer", "value")]
    for i in rows:
        for t, k in enumerate(layer_keys):
            out.append((labels[i], k, format_float(values[i, t])))
    return _csv(out)


def _csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _dumps(obj):
    return (json.dumps(obj, indent=2, allow_nan=False) + "\n").encode("utf-8")


def write_atomic(path, data):
    """Write ``data`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
