"""Tests for structured Cholesky, projected-descent factorization, and refutation."""

import numpy as np
import pytest

from logmod import (
    Pattern,
    WitnessInvalid,
    decide_logmodular,
    factor_attempt,
    refute_logmodular,
    structured_cholesky,
)
from logmod.linalg import frobenius


def _random_pd(rng, n):
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return b.conj().T @ b + 0.1 * np.eye(n)


def test_structured_cholesky_upper_triangular():
    rng = np.random.default_rng(10)
    p = Pattern.upper_triangular(4)
    cert = decide_logmodular(p).certificate
    for _ in range(5):
        mat = _random_pd(rng, 4)
        factor = structured_cholesky(mat, cert)
        assert frobenius(factor.conj().T @ factor - mat) <= 1e-10 * (1.0 + frobenius(mat))
        assert np.all(np.abs(factor[~p.adjacency()]) <= 1e-12)


def test_structured_cholesky_respects_permuted_blocks():
    rng = np.random.default_rng(11)
    p = Pattern.from_pairs(3, [(1, 3), (3, 1), (2, 1), (2, 3)])
    cert = decide_logmodular(p).certificate
    for _ in range(5):
        mat = _random_pd(rng, 3)
        factor = structured_cholesky(mat, cert)
        assert frobenius(factor.conj().T @ factor - mat) <= 1e-10 * (1.0 + frobenius(mat))
        assert np.all(np.abs(factor[~p.adjacency()]) <= 1e-12)


def test_structured_cholesky_certificate_must_match():
    cert = decide_logmodular(Pattern.upper_triangular(2)).certificate
    with pytest.raises(ValueError):
        structured_cholesky(np.eye(3, dtype=complex), cert)


def test_factor_attempt_succeeds_on_triangular_pattern():
    rng = np.random.default_rng(12)
    p = Pattern.upper_triangular(3)
    mat = _random_pd(rng, 3)
    result = factor_attempt(mat, p, starts=8, iters=400, seed=0)
    assert result.converged
    assert result.residual <= 1e-8
    assert np.all(np.abs(result.factor[~p.adjacency()]) <= 1e-12)
    assert frobenius(result.factor.conj().T @ result.factor - mat) <= 1e-7


def test_factor_attempt_hits_known_floor_on_diagonal_pattern():
    # With a diagonal factor, F* F is diagonal, so the off-diagonal entries of
    # P can never be matched; the best residual is sqrt(2) * |P_{12}|.
    mat = np.array([[1.0, 0.5], [0.5, 1.0]], dtype=complex)
    result = factor_attempt(mat, Pattern.diagonal(2), starts=6, iters=400, seed=3)
    assert result.converged
    assert result.residual == pytest.approx(np.sqrt(2) * 0.5, abs=1e-6)


def test_refute_logmodular_diagonal_pair():
    p = Pattern.diagonal(2)
    ref = refute_logmodular(p, (1, 2), starts=10, iters=200, seed=0)
    # the optimum over unit-norm matrices concentrated on an incomparable pair
    assert ref.bound == pytest.approx(np.sqrt(2), abs=1e-3)
    assert ref.bound >= 0.1
    assert ref.witness == (1, 2)
    assert ref.matrix.shape == (2, 2)


def test_refute_rejects_comparable_witness():
    with pytest.raises(WitnessInvalid):
        refute_logmodular(Pattern.upper_triangular(2), (1, 2))


def test_refutation_bound_for_every_small_negative():
    # every non-triangularizable pattern on 3 points admits a solid lower bound
    from logmod import enumerate_patterns

    for p in enumerate_patterns(3):
        verdict = decide_logmodular(p)
        if verdict.is_logmodular:
            continue
        ref = refute_logmodular(p, verdict.witness, starts=8, iters=150, seed=0)
        assert ref.bound >= 0.1
