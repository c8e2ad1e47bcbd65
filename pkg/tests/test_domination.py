"""Tests for the barrier LMI solver and the two-summing / domination layer."""

import numpy as np
import pytest

from logmod import (
    TooLarge,
    Infeasible,
    LMIProblem,
    DimensionMismatch,
    SubspaceMap,
    cb_level_norm,
    dominating_state,
    dual_witness_functions,
    solve_lmi,
    two_summing_norm,
)
from logmod.linalg import hermitian_part


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _matrix_units(m):
    units = []
    for i in range(m):
        for j in range(m):
            e = np.zeros((m, m), dtype=complex)
            e[i, j] = 1.0
            units.append(e)
    return tuple(units)


def _first_row_map(m, scale=1.0):
    # x -> scale * (first row of x), viewed as a vector functional on M_m
    images = np.zeros((m * m, m), dtype=complex)
    for j in range(m):
        images[j, j] = scale
    return SubspaceMap("matrices", _matrix_units(m), images)


def test_lmi_problem_validation():
    g = np.eye(2, dtype=complex)
    eye = np.eye(2, dtype=complex)
    with pytest.raises(ValueError):
        LMIProblem(g, (eye,), costs=np.array([0.0]))
    with pytest.raises(ValueError):
        LMIProblem(g, (eye, eye), costs=np.array([-1.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        LMIProblem(g, (np.eye(3, dtype=complex),))
    with pytest.raises(DimensionMismatch):
        LMIProblem(g, (eye,), costs=np.array([1.0, 1.0]))
    big = np.eye(65, dtype=complex)
    with pytest.raises(TooLarge):
        LMIProblem(big, (big,))


def test_solve_lmi_two_diagonal_generators():
    # min nu1 + nu2  s.t.  diag(nu1, nu2) >= all-ones matrix.  The constraint
    # reads nu1 >= 1, nu2 >= 1, (nu1 - 1)(nu2 - 1) >= 1, and by AM-GM the
    # optimum is nu = (2, 2) with objective 4.
    g = np.ones((2, 2), dtype=complex)
    gens = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    sol = solve_lmi(LMIProblem(g, gens), tol=1e-8)
    assert sol.objective == pytest.approx(4.0, abs=1e-6)
    assert np.allclose(sol.weights, [2.0, 2.0], atol=1e-4)
    assert sol.gap <= 1e-8 * (1.0 + abs(sol.objective))
    assert sol.slack >= -1e-10


def test_solve_lmi_dual_certificate_is_valid():
    rng = np.random.default_rng(30)
    for _ in range(5):
        r, m = 3, 4
        b = _crandn(rng, r, r)
        g = b @ b.conj().T + 0.2 * np.eye(r)
        gens = []
        for _ in range(m):
            c = _crandn(rng, r, r)
            gens.append(c @ c.conj().T + 0.1 * np.eye(r))
        prob = LMIProblem(g, tuple(gens))
        sol = solve_lmi(prob, tol=1e-7)
        # primal feasibility
        s = sum(w * v for w, v in zip(sol.weights, gens)) - g
        assert np.linalg.eigvalsh(hermitian_part(s))[0] >= -1e-9
        assert np.all(sol.weights >= 0.0)
        # dual feasibility: Z psd, <V_i, Z> <= cost_i up to roundoff
        z = hermitian_part(sol.dual)
        assert np.linalg.eigvalsh(z)[0] >= -1e-9
        for v, cost in zip(gens, prob.costs):
            assert np.vdot(v, z).real <= cost * (1.0 + 1e-9) + 1e-9
        # weak duality sandwich within the certified gap
        lower = np.vdot(g, z).real
        assert sol.objective >= lower - 1e-12
        assert sol.objective - lower <= sol.gap + 1e-12


def test_solve_lmi_infeasibility_detection():
    with pytest.raises(Infeasible):
        solve_lmi(LMIProblem(np.eye(2, dtype=complex), ()))
    # a generator supported on the first coordinate cannot cover the identity
    g = np.eye(2, dtype=complex)
    gens = (np.diag([1.0, 0.0]).astype(complex),)
    with pytest.raises(Infeasible):
        solve_lmi(LMIProblem(g, gens))


def test_two_summing_rejects_matrix_maps():
    with pytest.raises(ValueError):
        two_summing_norm(_first_row_map(2))


def test_two_summing_one_dimensional_map():
    # one constant basis function mapped to 3: the 2-summing norm is just 3
    basis = np.array([[1.0, 1.0]], dtype=complex)
    images = np.array([[3.0]], dtype=complex)
    cert = two_summing_norm(SubspaceMap("functions", basis, images))
    assert cert.value == pytest.approx(3.0, abs=1e-5)
    assert cert.gap <= 1e-6 * (1.0 + cert.objective)
    assert cert.slack >= -1e-10


def test_two_summing_scales_linearly():
    rng = np.random.default_rng(31)
    basis = _crandn(rng, 3, 8)
    images = _crandn(rng, 3, 2)
    base = two_summing_norm(SubspaceMap("functions", basis, images))
    scaled = two_summing_norm(SubspaceMap("functions", basis, 2.5 * images))
    assert scaled.value == pytest.approx(2.5 * base.value, rel=1e-5)


def test_dual_witness_functions_reproduce_value():
    rng = np.random.default_rng(32)
    psi = SubspaceMap("functions", _crandn(rng, 3, 10), _crandn(rng, 3, 2))
    cert = two_summing_norm(psi)
    fam = dual_witness_functions(cert)
    assert fam.shape[1] == 3
    values = fam @ psi.basis
    dom = np.sqrt((np.abs(values) ** 2).sum(axis=0).max())
    img = np.sqrt(
        np.einsum("ji,ik,jk->", fam.conj(), psi.image_gram(), fam).real
    )
    assert img / dom == pytest.approx(cert.value, abs=1e-6)


def test_cb_levels_nested_and_dominated():
    rng = np.random.default_rng(33)
    psi = SubspaceMap("functions", _crandn(rng, 3, 9), _crandn(rng, 3, 3))
    cert = two_summing_norm(psi)
    prev = 0.0
    for cols in (1, 2, 3):
        level = cb_level_norm(psi, "row", 1, cols, samples=40, seed=7)
        assert level >= prev - 1e-12  # sampling is nested along the columns
        assert level <= cert.value + 1e-8
        prev = level
    assert cb_level_norm(psi, "column", 2, 2, samples=40, seed=7) <= cert.value + 1e-8


def test_dominating_state_first_row_functional():
    cert = dominating_state(_first_row_map(3), side="row")
    assert cert.side == "row"
    assert cert.value == pytest.approx(1.0, abs=1e-6)
    assert cert.slack >= -1e-8
    density = np.asarray(cert.measure)
    assert np.trace(density).real == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.eigvalsh(hermitian_part(density))[0] >= -1e-10
    # the optimal state concentrates on the coordinate the functional reads
    assert density[0, 0].real == pytest.approx(1.0, abs=1e-6)


def test_dominating_state_scaled_map_prices_linearly():
    cert = dominating_state(_first_row_map(3, scale=2.0), side="row")
    assert cert.value == pytest.approx(2.0, abs=1e-6)


def test_dominating_state_column_side():
    # x -> first column of x, dominated on the adjoint side by the same state
    m = 3
    images = np.zeros((m * m, m), dtype=complex)
    for i in range(m):
        images[i * m, i] = 1.0
    psi = SubspaceMap("matrices", _matrix_units(m), images)
    cert = dominating_state(psi, side="column")
    assert cert.side == "column"
    assert cert.value == pytest.approx(1.0, abs=1e-6)
    assert cert.slack >= -1e-7
    density = np.asarray(cert.measure)
    assert density[0, 0].real == pytest.approx(1.0, abs=1e-6)
