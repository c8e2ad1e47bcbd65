"""Structured Cholesky inside block-triangular patterns, and a numerical
refutation oracle for patterns that are not block-triangularizable.

The refutation route minimizes ``||A* A - P||_F^2`` over matrices ``A``
supported on the pattern by projected gradient descent (Wirtinger gradient
``2 A (A* A - P)``, Barzilai-Borwein trial steps, Armijo backtracking with
constant 1e-4 and shrink factor 0.5).  A multistart residual floor that stays
large certifies that the chosen positive definite matrix admits no approximate
factorization with the prescribed support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, WitnessInvalid
from .linalg import as_matrix, cholesky, frobenius
from .patterns import BlockStructure, Pattern

__all__ = [
    "FactorResult",
    "Refutation",
    "structured_cholesky",
    "factor_attempt",
    "refute_logmodular",
]


@dataclass(frozen=True)
class FactorResult:
    """Outcome of a factorization attempt.

    ``residual`` is ``||A* A - P||_F`` for the returned ``factor``;
    ``converged`` reports whether the winning start reached stationarity
    before its iteration budget ran out.  ``history`` holds that start's
    per-iteration residuals (monotone nonincreasing).
    """

    factor: np.ndarray
    residual: float
    converged: bool
    history: np.ndarray


@dataclass(frozen=True)
class Refutation:
    """A positive definite matrix and a certified residual floor over a pattern."""

    matrix: np.ndarray
    bound: float
    witness: tuple


def structured_cholesky(p_matrix, cert: BlockStructure, tol: float | None = None) -> np.ndarray:
    """Cholesky-style factor supported on a certified block-triangular pattern.

    Conjugates ``P`` by the certificate permutation, takes the semidefinite
    upper Cholesky factor, and permutes back, so ``A* A = P`` with ``A``
    supported on ``{(i, j) : perm(i) <= perm(j)}`` - a subset of the certified
    block pattern.
    """
    p_matrix = as_matrix(p_matrix, "P")
    n = p_matrix.shape[0]
    if len(cert.permutation) != n:
        raise ValueError("certificate size does not match matrix")
    new_pos = np.array(cert.permutation) - 1  # original index -> new position
    inv = np.argsort(new_pos)  # new position -> original index
    permuted = p_matrix[np.ix_(inv, inv)]
    u = cholesky(permuted, tol=tol)
    factor = u[np.ix_(new_pos, new_pos)]
    resid = frobenius(factor.conj().T @ factor - p_matrix)
    if resid > 1e-8 * (1.0 + frobenius(p_matrix)):  # pragma: no cover - guard
        raise NumericalFailure(f"structured factor residual {resid:.3e} too large")
    return factor


def _objective(a: np.ndarray, p_matrix: np.ndarray) -> tuple[float, np.ndarray]:
    r = a.conj().T @ a - p_matrix
    return float(np.vdot(r, r).real), r


def _descend(p_matrix: np.ndarray, mask: np.ndarray, a: np.ndarray, iters: int):
    """Monotone projected descent from ``a``; returns (A, history, converged)."""
    scale = 1.0 + frobenius(p_matrix)
    f, r = _objective(a, p_matrix)
    grad = 2.0 * (a @ r) * mask
    history = [np.sqrt(f)]
    step = 1.0 / (4.0 * scale)
    prev_a = None
    prev_grad = None
    converged = False
    for _ in range(iters):
        gnorm2 = float(np.vdot(grad, grad).real)
        if np.sqrt(gnorm2) <= 1e-12 * scale * scale or np.sqrt(f) <= 1e-13 * scale:
            converged = True
            break
        # Barzilai-Borwein trial step when curvature information is available
        if prev_a is not None:
            da = a - prev_a
            dg = grad - prev_grad
            denom = float(np.vdot(da, dg).real)
            if denom > 1e-300:
                step = float(np.vdot(da, da).real) / denom
            else:
                step *= 4.0
        step = min(max(step, 1e-18), 1e6)
        accepted = False
        s = step
        for _halving in range(60):
            cand = a - s * grad
            f_cand, r_cand = _objective(cand, p_matrix)
            if f_cand <= f - 1e-4 * s * gnorm2:
                accepted = True
                break
            s *= 0.5
        if not accepted:
            converged = True  # no descent possible along the gradient: stationary
            break
        prev_a, prev_grad = a, grad
        a, f, r = cand, f_cand, r_cand
        grad = 2.0 * (a @ r) * mask
        step = s
        history.append(np.sqrt(f))
    return a, np.array(history), converged


def factor_attempt(
    p_matrix,
    p: Pattern,
    starts: int = 10,
    iters: int = 500,
    seed: int = 0,
) -> FactorResult:
    """Best pattern-supported approximate factorization over multistart descent.

    Starting points draw complex Gaussian entries on the pattern, scaled so
    ``||A0* A0||_F = ||P||_F``; the result is the lowest-residual run (ties
    broken by start index).  Deterministic for a fixed seed.
    """
    p_matrix = as_matrix(p_matrix, "P")
    n = p_matrix.shape[0]
    if p.n != n:
        raise ValueError("pattern size does not match matrix")
    if starts < 1 or iters < 0:
        raise ValueError("starts must be >= 1 and iters >= 0")
    mask = p.mask()
    rng = np.random.default_rng(seed)
    p_norm = frobenius(p_matrix)
    best = None
    for _ in range(starts):
        a0 = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * mask
        gram_norm = frobenius(a0.conj().T @ a0)
        if gram_norm > 0 and p_norm > 0:
            a0 *= np.sqrt(p_norm / gram_norm)
        a, history, converged = _descend(p_matrix, mask, a0, iters)
        resid = history[-1]
        if best is None or resid < best.residual:
            best = FactorResult(a, float(resid), converged, history)
    return best


def refute_logmodular(
    p: Pattern,
    witness: tuple,
    starts: int = 20,
    iters: int = 300,
    seed: int = 0,
) -> Refutation:
    """Residual floor for the canonical hard matrix attached to a witness pair.

    For an incomparable pair ``(i, j)`` the target is
    ``P = I + E_ii + E_ij + E_ji + E_jj`` (positive definite).  The returned
    bound is the minimum multistart residual of :func:`factor_attempt`; a
    large value certifies that ``P`` stays far from ``{A* A : supp A in p}``.
    Raises :class:`WitnessInvalid` if the pair is comparable in the pattern.
    """
    i, j = int(witness[0]), int(witness[1])
    if i == j or (i, j) in p or (j, i) in p:
        raise WitnessInvalid(f"pair {(i, j)} is comparable in the pattern")
    n = p.n
    target = np.eye(n, dtype=complex)
    for (r, c) in ((i, i), (i, j), (j, i), (j, j)):
        target[r - 1, c - 1] += 1.0
    res = factor_attempt(target, p, starts=starts, iters=iters, seed=seed)
    return Refutation(matrix=target, bound=res.residual, witness=(i, j))
