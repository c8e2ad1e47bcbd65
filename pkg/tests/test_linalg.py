"""Tests for the shared dense linear-algebra helpers."""

import numpy as np
import pytest

from logmod import (
    NotHermitian,
    NotPSD,
    cholesky,
    col_block_norm,
    herm_eig,
    operator_norm,
    row_block_norm,
)
from logmod.linalg import frobenius, hermitian_part


def _random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    b = rng.standard_normal((rank, n)) + 1j * rng.standard_normal((rank, n))
    return b.conj().T @ b


def test_cholesky_roundtrip():
    rng = np.random.default_rng(0)
    for n in [1, 2, 5, 9]:
        p = _random_psd(rng, n)
        u = cholesky(p)
        assert np.allclose(np.tril(u, -1), 0.0)
        assert frobenius(u.conj().T @ u - p) <= 1e-10 * (1.0 + frobenius(p))


def test_cholesky_semidefinite_and_rejection():
    rng = np.random.default_rng(1)
    p = _random_psd(rng, 6, rank=3)
    u = cholesky(p)
    assert frobenius(u.conj().T @ u - p) <= 1e-8 * (1.0 + frobenius(p))

    indefinite = np.diag([1.0, -0.5]).astype(complex)
    with pytest.raises(NotPSD):
        cholesky(indefinite)
    with pytest.raises(NotHermitian):
        cholesky(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_herm_eig_orthonormal_ascending():
    rng = np.random.default_rng(2)
    h = hermitian_part(rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)))
    eig = herm_eig(h)
    assert np.all(np.diff(eig.values) >= -1e-12)
    assert np.allclose(eig.vectors.conj().T @ eig.vectors, np.eye(7), atol=1e-10)
    rebuilt = (eig.vectors * eig.values) @ eig.vectors.conj().T
    assert frobenius(rebuilt - h) <= 1e-10 * (1.0 + frobenius(h))


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    assert operator_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], abs=1e-12)
    assert operator_norm(np.diag([3.0, -5.0, 1.0])) == pytest.approx(5.0, abs=1e-12)


def test_row_block_norm_single_row_is_euclidean():
    rng = np.random.default_rng(4)
    grid = rng.standard_normal((1, 5, 3)) + 1j * rng.standard_normal((1, 5, 3))
    assert row_block_norm(grid) == pytest.approx(np.linalg.norm(grid.ravel()), abs=1e-12)


def test_col_block_norm_single_column_is_euclidean():
    rng = np.random.default_rng(5)
    grid = rng.standard_normal((4, 1, 3)) + 1j * rng.standard_normal((4, 1, 3))
    assert col_block_norm(grid) == pytest.approx(np.linalg.norm(grid.ravel()), abs=1e-12)


def test_block_norms_agree_with_stacked_matrices():
    # Grid entries with a one-hot last axis reduce both norms to ordinary
    # operator norms of the scalar matrix they encode.
    rng = np.random.default_rng(6)
    m, k = 3, 4
    scalars = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
    grid = scalars[:, :, None] * np.eye(1)
    assert row_block_norm(grid) == pytest.approx(operator_norm(scalars), abs=1e-12)
    assert col_block_norm(grid) == pytest.approx(operator_norm(scalars), abs=1e-12)


def test_block_norms_monotone_in_padding():
    # Appending an all-zero row or column never changes the value.
    rng = np.random.default_rng(7)
    grid = rng.standard_normal((2, 3, 4)) + 1j * rng.standard_normal((2, 3, 4))
    padded_rows = np.concatenate([grid, np.zeros((1, 3, 4))], axis=0)
    padded_cols = np.concatenate([grid, np.zeros((2, 1, 4))], axis=1)
    assert row_block_norm(padded_rows) == pytest.approx(row_block_norm(grid), abs=1e-12)
    assert col_block_norm(padded_cols) == pytest.approx(col_block_norm(grid), abs=1e-12)
