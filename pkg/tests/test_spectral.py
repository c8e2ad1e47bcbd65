"""Tests for trigonometric factorization and boundary-function machinery."""

import numpy as np
import pytest

from logmod import (
    AnalyticPoly,
    BoundaryFunction,
    DegenerateLeading,
    NotNonnegative,
    NotPositive,
    TrigPoly,
    fejer_riesz,
    logmodular_witness,
    outer_function,
)
from logmod.spectral import conjugate_function


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _trig_sup_error(trig, factor, n=2048):
    theta = 2 * np.pi * np.arange(n) / n
    return float(np.max(np.abs(trig.evaluate(theta) - np.abs(factor.on_circle(theta)) ** 2)))


def test_trigpoly_requires_conjugate_symmetry():
    TrigPoly(np.array([1.0, 2.0, 1.0]))  # c_{-1} = conj(c_1)
    with pytest.raises(ValueError):
        TrigPoly(np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        TrigPoly(np.array([1.0, 2.0j, 1.0]))  # middle coefficient not real


def test_from_factor_matches_squared_modulus():
    rng = np.random.default_rng(20)
    for deg in (0, 1, 3, 7):
        a = AnalyticPoly(_crandn(rng, deg + 1))
        trig = TrigPoly.from_factor(a)
        assert trig.degree == deg or (deg > 0 and abs(a.coeffs[-1]) < 1e-12)
        assert _trig_sup_error(trig, a) <= 1e-10 * (1.0 + np.max(np.abs(trig.coeffs)))


def test_fejer_riesz_roundtrip():
    rng = np.random.default_rng(21)
    for deg in (1, 2, 5, 11):
        a = AnalyticPoly(_crandn(rng, deg + 1))
        trig = TrigPoly.from_factor(a)
        b = fejer_riesz(trig)
        assert _trig_sup_error(trig, b) <= 1e-8 * (1.0 + np.max(np.abs(trig.coeffs)))
        # the recovered factor has no roots inside the open unit disk
        if b.degree > 0:
            assert np.min(np.abs(b.roots())) >= 1.0 - 1e-7


def test_fejer_riesz_constant():
    b = fejer_riesz(TrigPoly(np.array([4.0])))
    assert np.allclose(b.coeffs, [2.0])


def test_fejer_riesz_boundary_zero():
    # 2 + 2cos(theta) vanishes at theta = pi: the factor is 1 + z
    trig = TrigPoly(np.array([1.0, 2.0, 1.0]))
    b = fejer_riesz(trig)
    assert _trig_sup_error(trig, b) <= 1e-6


def test_fejer_riesz_rejects_sign_changing():
    with pytest.raises(NotNonnegative):
        fejer_riesz(TrigPoly(np.array([0.5, 0.0, 0.5])))  # cos(theta)


def test_fejer_riesz_rejects_zero_leading_coefficient():
    with pytest.raises(DegenerateLeading):
        fejer_riesz(TrigPoly(np.array([0.0, 1.0, 0.0])))


def test_conjugate_function_pairs_cosine_with_sine():
    n = 64
    theta = 2 * np.pi * np.arange(n) / n
    assert np.max(np.abs(conjugate_function(np.cos(theta)) - np.sin(theta))) <= 1e-12
    # conjugation kills constants
    assert np.max(np.abs(conjugate_function(np.ones(n)))) <= 1e-12


def test_outer_function_recovers_polynomial_modulus():
    n = 64
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.abs(1 + 0.5 * np.exp(1j * theta)) ** 2
    a = outer_function(BoundaryFunction(6, vals))
    assert np.max(np.abs(np.abs(a.values) ** 2 - vals)) <= 1e-12
    # analytic: negative-frequency Fourier coefficients vanish
    spec = np.fft.fft(a.values) / n
    assert np.max(np.abs(spec[n // 2 + 1 :])) <= 1e-9


def test_outer_function_requires_positive_samples():
    n = 64
    theta = 2 * np.pi * np.arange(n) / n
    with pytest.raises(NotPositive):
        outer_function(BoundaryFunction(6, np.cos(theta)))
    with pytest.raises(NotPositive):
        outer_function(BoundaryFunction(6, np.maximum(np.sin(theta), 0.0)))
    with pytest.raises(NotPositive):
        outer_function(BoundaryFunction(6, np.exp(1j * theta)))  # complex samples


def test_logmodular_witness_smooth_positive_weight():
    n = 256
    theta = 2 * np.pi * np.arange(n) / n
    f = BoundaryFunction(8, np.exp(np.cos(theta)))
    witness, err = logmodular_witness(f, 1e-6)
    assert err <= 1e-6
    # independent check: the squared modulus reproduces the weight at f's grid
    stride = witness.n // f.n
    dev = np.max(np.abs(np.abs(witness.values[::stride]) ** 2 - f.values))
    assert dev <= 1e-6


def test_boundary_function_grid_checks():
    with pytest.raises(ValueError):
        BoundaryFunction(3, np.ones(9))  # length must be 2**grid_log2
    f = BoundaryFunction(3, np.arange(8.0))
    assert f.n == 8
    assert np.allclose(f.theta(), 2 * np.pi * np.arange(8) / 8)
