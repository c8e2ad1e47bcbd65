"""Dense complex linear algebra kernels used throughout the package.

Matrices are plain ``numpy.ndarray`` objects with dtype complex128 and
row-major layout; vectors are 1-d arrays.  Inner products are taken
conjugate-linear in the *second* argument, ``<x, y> = y* x``, and every Gram
matrix in this package follows that convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

__all__ = [
    "HermitianEigen",
    "herm_eig",
    "cholesky",
    "operator_norm",
    "row_block_norm",
    "col_block_norm",
    "as_matrix",
    "frobenius",
    "hermitian_part",
]


def as_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Coerce ``obj`` to a finite 2-d complex128 array."""
    a = np.asarray(obj, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-d, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _require_square(a: np.ndarray, name: str) -> np.ndarray:
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def _require_hermitian(a: np.ndarray, name: str, rtol: float = 1e-12) -> np.ndarray:
    a = _require_square(a, name)
    defect = np.linalg.norm(a - a.conj().T)
    if defect > rtol * (1.0 + np.linalg.norm(a)):
        raise NotHermitian(f"{name} deviates from Hermitian symmetry by {defect:.3e}")
    return hermitian_part(a)


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral data of a Hermitian matrix.

    ``values`` are real and ascending; ``vectors`` has the matching orthonormal
    eigenvectors as columns, so ``H == vectors @ diag(values) @ vectors*``.
    """

    values: np.ndarray
    vectors: np.ndarray


def herm_eig(h) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix.

    Raises :class:`NotHermitian` when the input is not Hermitian within
    ``1e-12 * (1 + ||H||_F)`` and :class:`NoConvergence` if the underlying
    iteration fails (essentially never for finite input).
    """
    h = _require_hermitian(h, "H")
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise NoConvergence(f"eigeniteration failed: {exc}") from exc
    return HermitianEigen(values=values, vectors=vectors)


def cholesky(p, tol: float | None = None) -> np.ndarray:
    """Upper-triangular factor ``U`` with ``U* U = P`` for Hermitian psd ``P``.

    Pivots below ``tol`` are treated as exact zeros and the corresponding row
    of ``U`` is zeroed, which makes genuinely semidefinite input legal (e.g.
    the all-ones matrix factors as a single nonzero row).  ``tol`` defaults to
    ``1e-10 * max(1, max diagonal)``; an eigenvalue below ``-tol`` raises
    :class:`NotPSD`.
    """
    p = _require_hermitian(p, "P")
    n = p.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    diag = np.real(np.diag(p))
    if tol is None:
        tol = 1e-10 * max(1.0, float(diag.max(initial=0.0)))
    evals = np.linalg.eigvalsh(p)
    if evals[0] < -tol:
        raise NotPSD(f"smallest eigenvalue {evals[0]:.3e} < -{tol:.1e}")
    u = np.zeros((n, n), dtype=complex)
    for i in range(n):
        pivot = p[i, i].real - np.real(np.vdot(u[:i, i], u[:i, i]))
        if pivot <= tol:
            continue  # dependent row: leave row i of U zero
        root = np.sqrt(pivot)
        u[i, i] = root
        if i + 1 < n:
            u[i, i + 1 :] = (p[i, i + 1 :] - u[:i, i].conj() @ u[:i, i + 1 :]) / root
    return u


def operator_norm(a) -> float:
    """Largest singular value; 0.0 for an empty or zero matrix."""
    a = as_matrix(a, "A")
    if a.size == 0 or not a.any():
        return 0.0
    return float(np.linalg.norm(a, 2))


def _as_vector_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=complex)
    if g.ndim != 3:
        raise DimensionMismatch(
            f"vector grid must have shape (rows, cols, dim), got {g.shape}"
        )
    if not np.all(np.isfinite(g)):
        raise ValueError("vector grid contains non-finite entries")
    return g


def row_block_norm(grid) -> float:
    """Norm of an ``m x k`` grid of Hilbert-space vectors read as a row object.

    The value is ``||G||^(1/2)`` for the m x m Gram matrix
    ``G[i, j] = sum_l <h_{i,l}, h_{j,l}>``; a ``1 x k`` grid reduces to the
    Euclidean norm of the concatenated vector.
    """
    g = _as_vector_grid(grid)
    gram = np.einsum("ild,jld->ij", g, g.conj())
    return float(np.sqrt(max(np.linalg.eigvalsh(hermitian_part(gram))[-1], 0.0)))


def col_block_norm(grid) -> float:
    """Norm of an ``m x k`` vector grid read as a column object.

    Each grid column is stacked into a single tall vector and the operator
    norm of the resulting ``(m*d) x k`` matrix is returned.
    """
    g = _as_vector_grid(grid)
    m, k, d = g.shape
    stacked = np.transpose(g, (0, 2, 1)).reshape(m * d, k)
    return operator_norm(stacked)
