"""Supracentrality operator, its dominant eigenpair, and derived centralities.

The supracentrality matrix of ``T`` layer centrality matrices ``C^(t)``
coupled by a ``T x T`` matrix ``A~`` with strength ``omega`` is::

    C(omega) = blockdiag(C^(1), ..., C^(T)) + omega * kron(A~, I_N)

Vectors of length ``N*T`` are laid out layer-major: entry ``N*t + i``
(0-based) belongs to node ``i`` in layer ``t``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _perron
from .coupling import InterlayerCoupling, is_strongly_connected
from .exceptions import ConvergenceError, DomainError, PreconditionError
from .layer_centrality import LayerCentralitySet, build_layer_set
from .temporal_net import is_strongly_connected_pattern

__all__ = [
    "SupraOperator",
    "PreconditionReport",
    "Eigenpair",
    "CentralityResult",
    "apply",
    "check_preconditions",
    "dominant_eigenpair",
    "extract",
    "solve",
    "sweep",
    "METHODS",
    "DENSE_SOLVE_MAX",
]

log = logging.getLogger(__name__)

METHODS = ("auto", "power", "arnoldi", "dense")
DENSE_SOLVE_MAX = 512


@dataclass(frozen=True, eq=False)
class SupraOperator:
    """Matrix-free ``C(omega) = C_hat + omega (A~ kron I)``."""

    layer_set: LayerCentralitySet
    coupling: InterlayerCoupling
    omega: float
    _stack: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not (self.omega >= 0 and np.isfinite(self.omega)):
            raise DomainError(f"omega must be finite and nonnegative, got {self.omega}")
        if self.coupling.n_layers != self.layer_set.n_layers:
            raise DomainError(f"coupling is {self.coupling.n_layers}x{self.coupling.n_layers} "
                              f"but there are {self.layer_set.n_layers} layers")
        if self.layer_set.all_dense:
            stack = np.ascontiguousarray(np.stack(self.layer_set.matrices))
            stack.flags.writeable = False
            object.__setattr__(self, "_stack", stack)

    @property
    def N(self):
        return self.layer_set.n_nodes

    @property
    def T(self):
        return self.layer_set.n_layers

    @property
    def shape(self):
        n = self.N * self.T
        return (n, n)

    def matvec(self, v):
        return apply(self, v)

    def as_linear_operator(self):
        return spla.LinearOperator(self.shape, matvec=self.matvec, dtype=np.float64)

    def to_dense(self):
        """Explicit ``NT x NT`` matrix. Only sensible for small problems."""
        N, T = self.N, self.T
        M = np.kron(self.coupling.matrix * self.omega, np.eye(N))
        for t, C in enumerate(self.layer_set.matrices):
            M[t * N:(t + 1) * N, t * N:(t + 1) * N] += _perron.as_array(C)
        return M


def apply(op, v):
    """Apply ``C(omega)`` to a layer-major vector of length ``N*T``.

    Block ``t`` of the result is ``C^(t) v_t + omega * sum_s A~[t, s] v_s``.
    """
    v = np.asarray(v, dtype=np.float64)
    N, T = op.N, op.T
    if v.shape != (N * T,):
        raise DomainError(f"vector has shape {v.shape}, expected {(N * T,)}")
    blocks = v.reshape(T, N)
    if op._stack is not None:
        out = np.matmul(op._stack, blocks[:, :, None])[:, :, 0]
    else:
        out = np.empty((T, N))
        for t, C in enumerate(op.layer_set.matrices):
            out[t] = C @ blocks[t]
    if op.omega:
        out += op.omega * (op.coupling.matrix @ blocks)
    return out.reshape(-1)


@dataclass(frozen=True)
class PreconditionReport:
    """Outcome of checking the irreducibility hypotheses of the Perron argument."""

    coupling_strongly_connected: bool
    layer_sum_irreducible: bool
    nonnegative: bool
    omega_positive: bool
    messages: tuple[str, ...] = ()

    @property
    def ok(self):
        return (self.coupling_strongly_connected and self.layer_sum_irreducible
                and self.nonnegative and self.omega_positive)


def check_preconditions(op):
    """Check that ``C(omega)`` is irreducible and nonnegative.

    Requires a strongly connected coupling graph, an irreducible
    ``sum_t C^(t)``, nonnegative inputs, and ``omega > 0`` (at ``omega = 0``
    the layers decouple and the dominant eigenvalue is degenerate).
    """
    msgs = []
    strong = is_strongly_connected(op.coupling)
    if not strong:
        msgs.append("interlayer coupling graph is not strongly connected")
    irreducible = is_strongly_connected_pattern(op.layer_set.sum_pattern())
    if not irreducible:
        msgs.append("sum of layer centrality matrices is reducible")
    nonneg = op.layer_set.is_nonnegative()
    if not nonneg:
        msgs.append("layer centrality matrices have negative or non-finite entries")
    pos = op.omega > 0 or op.T == 1
    if not pos:
        msgs.append("omega = 0 decouples the layers; use the weak-coupling limit instead")
    return PreconditionReport(strong, irreducible, nonneg, pos, tuple(msgs))


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray
    iterations: int
    residual: float
    method: str

    def __iter__(self):
        yield self.value
        yield self.vector


def _residual(op, lam, v):
    r = np.abs(apply(op, v) - lam * v).sum()
    return float(r / abs(lam)) if lam else float(r)


def _arnoldi(op, tol, max_iter, v0):
    n = op.shape[0]
    if n < 3:
        return _dense(op)
    start = np.full(n, 1.0 / n) if v0 is None else np.abs(np.asarray(v0, dtype=np.float64))
    ncv = min(n, max(20, 2 * op.T + 1))
    try:
        vals, vecs = spla.eigs(op.as_linear_operator(), k=1, which="LR", v0=start,
                               ncv=ncv, tol=max(tol / (10 * n), np.finfo(float).eps),
                               maxiter=max_iter)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Arnoldi did not converge: {exc}") from None
    lam = float(vals[0].real)
    v = _perron.orient(vecs[:, 0])
    return lam, v, 0


def _dense(op):
    vals, vecs = np.linalg.eig(op.to_dense())
    k = int(np.argmax(vals.real))
    return float(vals[k].real), _perron.orient(vecs[:, k]), 0


def dominant_eigenpair(op, tol=1e-12, max_iter=10**6, method="auto", v0=None, shift=1.0,
                       check=True):
    """Dominant eigenvalue and positive unit 1-norm eigenvector of ``C(omega)``.

    Parameters
    ----------
    op : SupraOperator
    tol : float
        Bound on the relative residual ``||C v - lam v||_1 / lam``.
    max_iter : int
        Iteration cap for the iterative methods.
    method : {"auto", "power", "arnoldi", "dense"}
        ``power`` is power iteration on ``C(omega) + shift*I``. ``arnoldi``
        runs ARPACK on the matrix-free operator. ``dense`` assembles the
        matrix. ``auto`` picks ``dense`` up to ``DENSE_SOLVE_MAX`` unknowns
        and ``arnoldi`` beyond.
    v0 : array, optional
        Warm start for the iterative methods.

    Raises
    ------
    PreconditionError
        When the irreducibility hypotheses fail (the report is attached).
    ConvergenceError
        When the residual stays above ``tol``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
    if check:
        report = check_preconditions(op)
        if not report.ok:
            raise PreconditionError("; ".join(report.messages), report)
    n = op.shape[0]
    if method == "auto":
        method = "dense" if n <= DENSE_SOLVE_MAX else "arnoldi"

    if method == "power":
        pair = _perron.power_iteration(op.matvec, n, shift=shift, tol=tol,
                                       max_iter=max_iter, v0=v0)
        lam, v, iters = pair.value, pair.vector, pair.iterations
    elif method == "arnoldi":
        lam, v, iters = _arnoldi(op, tol, max_iter, v0)
    else:
        lam, v, iters = _dense(op)

    res = _residual(op, lam, v)
    if res > tol:
        raise ConvergenceError(f"{method} solve left relative residual {res:.3e} > {tol:.1e}",
                               iters, res)
    log.debug("omega=%g method=%s lambda=%.17g iterations=%d residual=%.3e",
              op.omega, method, lam, iters, res)
    return Eigenpair(lam, v, iters, res, method)


@dataclass(frozen=True)
class CentralityResult:
    """Joint, marginal and conditional centralities from one dominant eigenvector.

    ``joint``, ``cond_node`` and ``cond_layer`` are ``N x T``; ``mlc`` has
    length ``T`` and ``mnc`` length ``N``.
    """

    eigenvalue: float
    joint: np.ndarray
    mlc: np.ndarray
    mnc: np.ndarray
    cond_node: np.ndarray
    cond_layer: np.ndarray
    iterations: int = 0
    residual: float = 0.0
    omega: float | None = None
    method: str | None = None

    @property
    def vector(self):
        """The layer-major supravector these centralities were read from."""
        return self.joint.T.reshape(-1)


def extract(v, eigenvalue, n_nodes, n_layers, *, iterations=0, residual=0.0, omega=None,
            method=None, strict=True):
    """Reshape a supravector into centralities.

    ``W[i, t] = v[N t + i]``, ``mlc = W.sum(0)``, ``mnc = W.sum(1)``,
    ``cond_node = W / mlc`` and ``cond_layer = W / mnc[:, None]``. The vector
    is rescaled to unit 1-norm unless it already sums to one.

    With ``strict`` (the default) any nonpositive entry raises
    :class:`DomainError`. Otherwise zeros are allowed and 0/0 conditionals
    become NaN; asymptotic limit vectors need this.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (n_nodes * n_layers,):
        raise DomainError(f"vector has shape {v.shape}, expected {(n_nodes * n_layers,)}")
    if not np.all(np.isfinite(v)):
        raise DomainError("supravector has non-finite entries")
    if strict and v.min() <= 0:
        raise DomainError("supravector has nonpositive entries; the eigensolve is not a Perron vector")
    if not strict and v.min() < 0:
        raise DomainError("supravector has negative entries")
    total = v.sum()
    if abs(total - 1.0) > 4 * np.finfo(float).eps * v.size:
        v = v / total
    W = v.reshape(n_layers, n_nodes).T.copy()
    mlc = W.sum(axis=0)
    mnc = W.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        Z = W / mlc[None, :]
        Zh = W / mnc[:, None]
    return CentralityResult(float(eigenvalue), W, mlc, mnc, Z, Zh, int(iterations),
                            float(residual), omega, method)


def solve(layer_set, coupling, omega, **kwargs):
    """Dominant eigenpair plus extraction for one coupling strength."""
    op = SupraOperator(layer_set, coupling, float(omega))
    pair = dominant_eigenpair(op, **kwargs)
    return extract(pair.vector, pair.value, op.N, op.T, iterations=pair.iterations,
                   residual=pair.residual, omega=float(omega), method=pair.method)


def sweep(net, kind, coupling, omegas, *, tol=1e-12, max_iter=10**6, method="auto",
          warm_start=True):
    """Solve for each coupling strength in ``omegas``.

    ``net`` may be a :class:`TemporalNetwork` (layers built with ``kind``) or
    an already built :class:`LayerCentralitySet`. Each solve is independent;
    the previous eigenvector only seeds the next iterative solve.
    """
    omegas = [float(w) for w in omegas]
    if any(w < 0 for w in omegas):
        raise DomainError("omega values must be nonnegative")
    layer_set = net if isinstance(net, LayerCentralitySet) else build_layer_set(net, kind)
    results = []
    v0 = None
    for w in omegas:
        res = solve(layer_set, coupling, w, tol=tol, max_iter=max_iter, method=method, v0=v0)
        if warm_start:
            v0 = res.vector
        results.append(res)
    return results
