"""Perron eigenpairs of nonnegative matrices.

One shifted power iteration is shared by the supracentrality solver and by
the small auxiliary eigenproblems of the asymptotic limits. Small matrices
go through a dense eigendecomposition, which also exposes the spectrum
needed to check that the dominant eigenvalue is simple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ConvergenceError

DENSE_MAX = 2048
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class PerronPair:
    value: float
    vector: np.ndarray
    # None when the spectrum was not computed (iterative route)
    simple: bool | None = None
    iterations: int = 0
    residual: float = 0.0


def orient(vec):
    """Real part of ``vec``, signed to have a positive sum, scaled to unit 1-norm."""
    vec = np.real_if_close(np.asarray(vec), tol=1e6)
    vec = np.real(vec).astype(np.float64)
    s = vec.sum()
    if s == 0:
        s = vec[np.argmax(np.abs(vec))]
    vec = vec / s
    return vec / np.abs(vec).sum()


def power_iteration(matvec, n, *, shift=1.0, tol=1e-12, max_iter=10**6, v0=None,
                    check_every=1):
    """Dominant eigenpair of a nonnegative operator by shifted power iteration.

    Iterates ``v <- (M + shift I) v / ||.||_1``. The eigenvalue estimate is
    ``1^T M v`` and the stopping rule is the relative residual
    ``||M v - lam v||_1 / |lam| <= tol``.

    Returns
    -------
    PerronPair
        Eigenvalue of ``M`` (the shift removed) and the unit 1-norm vector.
    """
    v = np.full(n, 1.0 / n) if v0 is None else np.abs(np.asarray(v0, dtype=np.float64))
    if v.sum() == 0:
        v = np.full(n, 1.0 / n)
    v = v / v.sum()
    lam = 0.0
    res = np.inf
    for it in range(1, max_iter + 1):
        mv = matvec(v)
        lam = mv.sum()
        if it % check_every == 0 or it == max_iter:
            scale = abs(lam) if lam != 0 else 1.0
            res = np.abs(mv - lam * v).sum() / scale
            if res <= tol:
                return PerronPair(float(lam), v, None, it, float(res))
        w = mv + shift * v
        total = w.sum()
        if not np.isfinite(total) or total <= 0:
            raise ConvergenceError("power iteration lost positivity", it, res)
        v = w / total
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(relative residual {res:.3e} > {tol:.1e})", max_iter, float(res))


def _dense_pair(M, tie_rtol):
    vals, vecs = np.linalg.eig(M)
    k = int(np.argmax(vals.real))
    root = vals[k].real
    scale = max(abs(root), np.abs(vals).max(), np.finfo(float).tiny)
    simple = int(np.count_nonzero(np.abs(vals - root) <= tie_rtol * scale)) == 1
    vec = orient(vecs[:, k])
    res = np.abs(M @ vec - root * vec).sum() / (abs(root) if root else 1.0)
    return PerronPair(float(root), vec, simple, 0, float(res))


def as_array(M):
    """Dense float64 copy of a dense, sparse, or ``toarray``-capable matrix."""
    if isinstance(M, np.ndarray):
        return M.astype(np.float64, copy=False)
    if sp.issparse(M) or hasattr(M, "toarray"):
        return np.asarray(M.toarray(), dtype=np.float64)
    return np.asarray(M, dtype=np.float64)


def perron_pair(M, *, left=False, tol=1e-12, max_iter=10**6, dense_max=DENSE_MAX,
                tie_rtol=TIE_RTOL):
    """Dominant (Perron) eigenpair of a square nonnegative matrix.

    Parameters
    ----------
    M : ndarray, sparse matrix, or object with ``matvec``/``rmatvec``/``toarray``
    left : bool
        Return the left eigenvector (dominant eigenvector of ``M.T``).
    dense_max : int
        Dimensions up to this use a dense eigendecomposition.
    """
    n = M.shape[0]
    if n <= dense_max:
        A = as_array(M)
        return _dense_pair(A.T if left else A, tie_rtol)
    op = spla.aslinearoperator(M)
    mv = op.rmatvec if left else op.matvec
    return power_iteration(mv, n, tol=tol, max_iter=max_iter)
