"""Certified domination: an LMI solver, 2-summing norms, dominating states.

Canonical problem: minimize ``sum_i cost_i nu_i`` over ``nu >= 0`` subject to
``sum_i nu_i V_i >= G`` with Hermitian psd generators ``V_i``.  The solver is
a log-det barrier path follower (damped Newton on
``cost . nu - mu (log det S + sum log nu_i)`` with ``S = sum nu_i V_i - G``),
which keeps every iterate strictly feasible and hands back the dual matrix
``Z = mu S^{-1}`` with ``Z >= 0``, ``<V_i, Z> <= cost_i`` and duality gap
``~ mu (d + M)``.  Infeasibility is certified by a unit vector in the common
kernel of the generators on which the target is positive.

Clients: Pietsch-style 2-summing norms over finite point sets (measure
certificates), dominating states for matrix-subspace maps (column generation
over rank-one states), and sampled matrix-level norm lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, Infeasible, NoConvergence, TooLarge
from .linalg import hermitian_part, operator_norm

__all__ = [
    "LMIProblem",
    "LmiSolution",
    "SubspaceMap",
    "DominationCertificate",
    "solve_lmi",
    "two_summing_norm",
    "dominating_state",
    "cb_level_norm",
    "dual_witness_functions",
]

_MAX_DIM = 64
_MAX_GENERATORS = 4096


@dataclass(frozen=True)
class LMIProblem:
    """Data of the canonical cone program.

    ``target`` is Hermitian d x d, ``generators`` a sequence of Hermitian psd
    d x d matrices, ``costs`` strictly positive reals (all ones when omitted).
    """

    target: np.ndarray
    generators: tuple
    costs: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.target, dtype=complex)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise DimensionMismatch("target must be square")
        gens = tuple(np.asarray(v, dtype=complex) for v in self.generators)
        for v in gens:
            if v.shape != t.shape:
                raise DimensionMismatch("generator shape differs from target")
        if t.shape[0] > _MAX_DIM:
            raise TooLarge(f"dimension {t.shape[0]} exceeds {_MAX_DIM}")
        if len(gens) > _MAX_GENERATORS:
            raise TooLarge(f"{len(gens)} generators exceed {_MAX_GENERATORS}")
        costs = self.costs
        if costs is None:
            costs = np.ones(len(gens))
        costs = np.asarray(costs, dtype=float)
        if costs.shape != (len(gens),):
            raise DimensionMismatch("costs length must match generators")
        if len(gens) and float(costs.min()) <= 0:
            raise ValueError("costs must be strictly positive")
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "costs", costs)

    @property
    def dim(self) -> int:
        return self.target.shape[0]


@dataclass(frozen=True)
class LmiSolution:
    """Primal weights, dual certificate and the associated gap/slack."""

    weights: np.ndarray
    dual: np.ndarray
    gap: float
    objective: float
    slack: float


def _projected_problem(prob: LMIProblem):
    """Split off the common kernel of the generators; certify infeasibility.

    Returns ``(reduction basis R, projected target, projected generators)``.
    """
    g = hermitian_part(prob.target)
    d = prob.dim
    scale = 1.0 + float(np.linalg.norm(g))
    gens = [hermitian_part(v) for v in prob.generators]
    for v in gens:
        if np.linalg.eigvalsh(v)[0] < -1e-8 * (1.0 + float(np.linalg.norm(v))):
            raise ValueError("generators must be positive semidefinite")
    if not gens:
        vals, vecs = np.linalg.eigh(g)
        if vals[-1] > 1e-12 * scale:
            raise Infeasible(
                "no generators but target has positive part",
                certificate=vecs[:, -1],
            )
        return np.eye(d, dtype=complex), g, []
    w = hermitian_part(sum(gens))
    wvals, wvecs = np.linalg.eigh(w)
    kernel_tol = 1e-12 * (1.0 + wvals[-1])
    ker = wvals <= kernel_tol
    if not ker.any():
        return np.eye(d, dtype=complex), g, gens
    k_basis = wvecs[:, ker]
    r_basis = wvecs[:, ~ker]
    gk = hermitian_part(k_basis.conj().T @ g @ k_basis)
    kvals, kvecs = np.linalg.eigh(gk)
    if kvals[-1] > 1e-9 * scale:
        raise Infeasible(
            "target is positive on the common kernel of the generators",
            certificate=k_basis @ kvecs[:, -1],
        )
    gx = k_basis.conj().T @ g @ r_basis
    g_r = hermitian_part(r_basis.conj().T @ g @ r_basis)
    if np.linalg.norm(gx) > 1e-7 * scale:
        neg = hermitian_part(-gk)
        nvals, nvecs = np.linalg.eigh(neg)
        keep = nvals > 1e-12 * scale
        if not np.allclose(
            nvecs[:, keep] @ (nvecs[:, keep].conj().T @ gx), gx, atol=1e-7 * scale
        ):
            raise Infeasible(
                "target couples the generator kernel to its range",
                certificate=k_basis[:, :1].flatten() if k_basis.size else None,
            )
        pinv = nvecs[:, keep] @ np.diag(1.0 / nvals[keep]) @ nvecs[:, keep].conj().T
        g_r = hermitian_part(g_r + gx.conj().T @ pinv @ gx)
    reduced = [hermitian_part(r_basis.conj().T @ v @ r_basis) for v in gens]
    return r_basis, g_r, reduced


def _chol_logdet(s: np.ndarray):
    """Cholesky of a Hermitian matrix, or None when not positive definite."""
    try:
        c = np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        return None
    return c


def _barrier_value(costs, nu, s, mu):
    c = _chol_logdet(s)
    if c is None or nu.min() <= 0:
        return None
    logdet = 2.0 * float(np.sum(np.log(np.real(np.diag(c)))))
    return float(costs @ nu) - mu * (logdet + float(np.sum(np.log(nu))))


def _face_dual(mu, svals, svecs, nu, costs, gens_r, r_basis):
    """Dual candidate supported on the binding eigenspace of ``S``.

    The plain path certificate ``mu * S^{-1}`` inherits the conditioning of
    ``S``; re-solving the dual on the detected face by least squares (tight on
    the costs whose weights are active) removes that noise.  Returns an
    unpolished dual matrix or ``None`` when the face guess is unusable; the
    caller verifies feasibility honestly either way.
    """
    lam_max = float(svals[-1])
    k = int(np.sum(svals <= np.sqrt(mu * (1.0 + lam_max))))
    if k == 0:
        return None
    tau = np.sqrt(mu * (1.0 + float(nu.max())))
    active = np.flatnonzero(nu >= tau)
    if active.size == 0:
        return None
    u = svecs[:, :k]
    mats = [u.conj().T @ gens_r[i] @ u for i in active]
    rows = np.stack(
        [np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats]
    )
    y = np.linalg.lstsq(rows, costs[active], rcond=None)[0]
    y_mat = hermitian_part(
        y[: k * k].reshape(k, k) + 1j * y[k * k :].reshape(k, k)
    )
    yvals, yvecs = np.linalg.eigh(y_mat)
    if float(yvals[0]) < -1e-7 * max(1.0, float(yvals[-1])):
        return None
    y_mat = (yvecs * np.clip(yvals, 0.0, None)) @ yvecs.conj().T
    return r_basis @ (u @ y_mat @ u.conj().T) @ r_basis.conj().T


def solve_lmi(prob: LMIProblem, tol: float = 1e-6, max_outer: int = 60) -> LmiSolution:
    """Solve the canonical cone program with primal/dual certificates.

    On success the weights are strictly feasible, the dual satisfies
    ``Z >= 0`` and ``<V_i, Z> <= cost_i`` after a final feasibility polish,
    and ``|objective - <G, Z>| <= tol * (1 + |objective|)``.  Deterministic.

    The default ``tol`` reflects what a verified dual certificate can reach
    in double precision; requests far beyond it raise :class:`NoConvergence`
    once shrinking the path parameter stops improving the certified gap.
    """
    r_basis, g_r, gens_r = _projected_problem(prob)
    d = prob.dim
    costs = prob.costs
    m = len(gens_r)
    full_gens = [hermitian_part(v) for v in prob.generators]

    def full_slack(nu):
        s_full = -hermitian_part(prob.target)
        for wgt, v in zip(nu, full_gens):
            s_full = s_full + wgt * v
        return float(np.linalg.eigvalsh(hermitian_part(s_full))[0])

    if m == 0 or np.linalg.eigvalsh(g_r)[-1] <= 0.0:
        nu = np.zeros(m)
        return LmiSolution(nu, np.zeros((d, d), dtype=complex), 0.0, 0.0, full_slack(nu))

    r = g_r.shape[0]
    w_r = hermitian_part(sum(gens_r))
    wvals, wvecs = np.linalg.eigh(w_r)
    wvals = np.clip(wvals, 1e-14 * wvals[-1], None)
    w_half_inv = wvecs @ np.diag(1.0 / np.sqrt(wvals)) @ wvecs.conj().T
    t0 = float(np.linalg.eigvalsh(hermitian_part(w_half_inv @ g_r @ w_half_inv))[-1])
    nu = np.full(m, 2.0 * max(t0, 0.0) + 1.0)

    def assemble(nu):
        s = -g_r.copy()
        for wgt, v in zip(nu, gens_r):
            s = s + wgt * v
        return hermitian_part(s)

    mu = (float(costs @ nu) + 1.0) / (r + m)
    best_gap = np.inf
    stalled = 0
    for _outer in range(max_outer):
        # center at the current mu; inside the quadratic convergence region of
        # the self-concordant barrier (decrement^2 <= 0.04 mu) full Newton
        # steps are safe and reach the arithmetic noise floor quickly
        quad_steps = 0
        for _inner in range(80):
            s = assemble(nu)
            svals, svecs = np.linalg.eigh(s)
            if svals[0] <= 0:  # pragma: no cover - maintained by line search
                raise NoConvergence("interior point lost strict feasibility")
            s_half_inv = svecs @ np.diag(1.0 / np.sqrt(svals)) @ svecs.conj().T
            s_inv = svecs @ np.diag(1.0 / svals) @ svecs.conj().T
            traces = np.array(
                [float(np.vdot(s_inv, v).real) for v in gens_r]
            )
            grad = costs - mu * traces - mu / nu
            w_flat = np.stack(
                [(s_half_inv @ v @ s_half_inv).ravel() for v in gens_r]
            )
            hess = mu * np.real(w_flat.conj() @ w_flat.T)
            hess[np.diag_indices_from(hess)] += mu / nu**2
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                hess[np.diag_indices_from(hess)] += 1e-12 * np.trace(hess).real
                step = np.linalg.solve(hess, -grad)
            dec2 = float(-grad @ step)
            if not np.isfinite(dec2) or dec2 <= 1e-15 * mu:
                break
            limit = 1.0
            neg = step < 0
            if neg.any():
                limit = min(limit, float(0.99 * np.min(nu[neg] / -step[neg])))
            if dec2 <= 0.04 * mu:
                quad_steps += 1
                if quad_steps > 8:
                    break
                t_step = min(1.0, limit)
                moved = False
                for _bt in range(30):
                    cand = nu + t_step * step
                    if cand.min() > 0 and _chol_logdet(assemble(cand)) is not None:
                        nu = cand
                        moved = True
                        break
                    t_step *= 0.5
                if not moved:  # pragma: no cover - Dikin step keeps feasibility
                    break
                continue
            base = _barrier_value(costs, nu, s, mu)
            t_step = limit
            accepted = False
            for _bt in range(50):
                cand = nu + t_step * step
                val = _barrier_value(costs, cand, assemble(cand), mu)
                if val is not None and val <= base - 1e-4 * t_step * dec2:
                    accepted = True
                    break
                t_step *= 0.5
            if not accepted:
                break
            nu = nu + t_step * step
        obj = float(costs @ nu)
        s = assemble(nu)
        svals, svecs = np.linalg.eigh(s)
        # dual candidates: the path certificate mu * S^{-1}, plus a face
        # least-squares refinement once the binding structure is visible;
        # each is polished into the dual cone and its gap measured honestly
        candidates = [
            r_basis
            @ (
                mu
                * hermitian_part(
                    (svecs / np.clip(svals, 1e-300, None)) @ svecs.conj().T
                )
            )
            @ r_basis.conj().T
        ]
        if mu * (r + m) <= 1e-4 * (1.0 + abs(obj)):
            z_face = _face_dual(mu, svals, svecs, nu, costs, gens_r, r_basis)
            if z_face is not None:
                candidates.append(z_face)
        gap_best_stage = np.inf
        z_best = None
        for z in candidates:
            pairing = np.array([float(np.vdot(z, v).real) for v in full_gens])
            rel_viol = float(np.max((pairing - costs) / costs, initial=0.0))
            if rel_viol > 0:
                z = z / (1.0 + rel_viol)
            lower = float(np.vdot(z, hermitian_part(prob.target)).real)
            gap = abs(obj - lower)
            if gap < gap_best_stage:
                gap_best_stage = gap
                z_best = z
        if gap_best_stage <= tol * (1.0 + abs(obj)):
            return LmiSolution(nu.copy(), z_best, gap_best_stage, obj, full_slack(nu))
        if gap_best_stage < best_gap:
            best_gap = gap_best_stage
            stalled = 0
        elif mu * (r + m) <= 0.2 * tol * (1.0 + abs(obj)):
            stalled += 1
            if stalled >= 3:
                break  # smaller mu only adds noise; the wall is numerical
        mu /= 10.0
        if mu < 1e-18 * (1.0 + abs(obj)):
            break
    raise NoConvergence(
        f"requested gap {tol:.1e} unreachable; best certified gap {best_gap:.3e}"
    )


# ---------------------------------------------------------------------------
# subspace maps


@dataclass(frozen=True)
class SubspaceMap:
    """A linear map from a finite-dimensional operator/function subspace.

    ``kind`` is ``"functions"`` (basis = values on N points, shape (d, N)) or
    ``"matrices"`` (basis = tuple of m x m matrices).  ``images`` holds the
    image vectors as rows, shape (d, hilbert_dim). The basis must be linearly
    independent: its Gram matrix needs smallest eigenvalue >= 1e-10.
    """

    kind: str
    basis: tuple | np.ndarray
    images: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in ("functions", "matrices"):
            raise ValueError(f"unknown kind {self.kind!r}")
        images = np.asarray(self.images, dtype=complex)
        if images.ndim != 2:
            raise DimensionMismatch("images must be (d, hilbert_dim)")
        if self.kind == "functions":
            basis = np.asarray(self.basis, dtype=complex)
            if basis.ndim != 2:
                raise DimensionMismatch("function basis must be (d, points)")
            gram = basis @ basis.conj().T
        else:
            basis = tuple(np.asarray(b, dtype=complex) for b in self.basis)
            mside = basis[0].shape[0] if basis else 0
            for b in basis:
                if b.shape != (mside, mside):
                    raise DimensionMismatch("matrix basis entries must be square, equal size")
            gram = np.array(
                [[np.vdot(bj, bi) for bj in basis] for bi in basis]
            )
        if len(images) != (basis.shape[0] if self.kind == "functions" else len(basis)):
            raise DimensionMismatch("images count must match basis size")
        if len(images) and np.linalg.eigvalsh(hermitian_part(gram))[0] < 1e-10:
            raise ValueError("basis is numerically dependent (Gram min eig < 1e-10)")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "images", images)

    @property
    def size(self) -> int:
        """Number of basis elements."""
        return self.images.shape[0]

    def image_gram(self) -> np.ndarray:
        """Gram matrix ``G[i, j] = <images[j], images[i]>`` (= images_i* . images_j)."""
        return self.images.conj() @ self.images.T

    # -- evaluation helpers -------------------------------------------

    def domain_values(self, coeffs: np.ndarray) -> np.ndarray:
        """Element values: function samples, or the matrix, for given coefficients."""
        if self.kind == "functions":
            return np.tensordot(coeffs, self.basis, axes=([-1], [0]))
        stack = np.stack(self.basis)
        return np.tensordot(coeffs, stack, axes=([-1], [0]))

    def image_vectors(self, coeffs: np.ndarray) -> np.ndarray:
        return np.tensordot(coeffs, self.images, axes=([-1], [0]))


@dataclass(frozen=True)
class DominationCertificate:
    """Value with its dominating measure/state and dual optimality data."""

    value: float
    measure: np.ndarray
    dual: np.ndarray
    gap: float
    objective: float
    slack: float
    side: str | None = None


def _evaluation_generators(psi: SubspaceMap):
    """Rank-one generators ``V_x = w_x w_x*`` with ``w_x[i] = conj(basis_i(x))``."""
    basis = psi.basis
    gens = []
    for x in range(basis.shape[1]):
        w = basis[:, x].conj()
        gens.append(np.outer(w, w.conj()))
    return gens


def two_summing_norm(psi: SubspaceMap, tol: float = 1e-6) -> DominationCertificate:
    """2-summing norm of a function-subspace map with a Pietsch measure.

    Solves ``min sum nu_x`` s.t. ``sum nu_x V_x >= G_psi`` over the evaluation
    generators; the value is the square root of the objective and the measure
    is ``nu`` normalized so that ``value^2 sum mu_x V_x >= G_psi`` up to the
    solver slack.
    """
    if psi.kind != "functions":
        raise ValueError("two_summing_norm expects a function-kind map")
    gens = _evaluation_generators(psi)
    problem = LMIProblem(psi.image_gram(), tuple(gens))
    try:
        # aim well below the requested gap so the witness family extracted
        # from the dual reproduces the value to the same accuracy
        sol = solve_lmi(problem, tol=max(tol / 20.0, 1e-9))
    except NoConvergence:
        sol = solve_lmi(problem, tol=tol)
    total = float(sol.weights.sum())
    npoints = len(gens)
    measure = (
        sol.weights / total if total > 0 else np.full(npoints, 1.0 / max(npoints, 1))
    )
    return DominationCertificate(
        value=float(np.sqrt(max(sol.objective, 0.0))),
        measure=measure,
        dual=sol.dual,
        gap=sol.gap,
        objective=sol.objective,
        slack=sol.slack,
    )


def dual_witness_functions(cert: DominationCertificate, cutoff: float = 1e-13) -> np.ndarray:
    """Coefficient vectors ``alpha_j`` with ``Z = sum_j alpha_j alpha_j*``.

    Feeding these through the map's basis yields a row family whose domain
    norm is at most the generator cost while the image row norm squares to
    ``<G, Z>`` - the equality family behind the 2-summing value.
    """
    vals, vecs = np.linalg.eigh(hermitian_part(cert.dual))
    keep = vals > cutoff * max(vals.max(initial=0.0), 1.0)
    return (vecs[:, keep] * np.sqrt(vals[keep])).T


# ---------------------------------------------------------------------------
# dominating states (matrix domains) via column generation over rank-one states


def _state_generator(basis_stack: np.ndarray, u: np.ndarray, side: str) -> np.ndarray:
    """Coefficient-space generator of the rank-one state ``u u*``."""
    if side == "row":
        w = np.stack([b.conj().T @ u for b in basis_stack])  # w_i = b_i* u
        return (w.conj() @ w.T).T
    w = np.stack([b @ u for b in basis_stack])  # w_i = b_i u
    return w.conj() @ w.T


def _pricing_matrix(basis_stack: np.ndarray, z: np.ndarray, side: str) -> np.ndarray:
    """Hermitian T with ``<V_u, Z> = u* T u`` for rank-one states ``u u*``."""
    bc = basis_stack.conj()
    if side == "row":
        t = np.einsum("ji,jab,icb->ac", z, basis_stack, bc)
    else:
        t = np.einsum("ji,iba,jbc->ac", z, bc, basis_stack)
    return hermitian_part(t)


def dominating_state(
    psi: SubspaceMap,
    side: str = "row",
    tol: float = 1e-6,
    max_rounds: int = 200,
) -> DominationCertificate:
    """Least-trace state dominating a matrix-subspace map on the chosen side.

    ``side="row"`` certifies ``||psi(x)||^2 <= value^2 s(x x*)`` and
    ``side="column"`` the ``s(x* x)`` variant, with ``s`` the returned density
    matrix (trace one) and ``value^2`` the minimum total weight.  Solved by
    column generation: finite sets of rank-one states are priced against the
    dual via the largest eigenvalue of the pricing matrix.
    """
    if psi.kind != "matrices":
        raise ValueError("dominating_state expects a matrix-kind map")
    if side not in ("row", "column"):
        raise ValueError("side must be 'row' or 'column'")
    basis_stack = np.stack(psi.basis)
    mside = basis_stack.shape[1]
    gram = psi.image_gram()
    directions = [np.eye(mside, dtype=complex)[:, k] for k in range(mside)]
    sol = None
    price = np.inf
    for _ in range(max_rounds):
        gens = tuple(_state_generator(basis_stack, u, side) for u in directions)
        problem = LMIProblem(gram, gens)
        try:
            sol = solve_lmi(problem, tol=max(tol / 20.0, 1e-9))
        except NoConvergence:
            sol = solve_lmi(problem, tol=tol)
        t = _pricing_matrix(basis_stack, sol.dual, side)
        tvals, tvecs = np.linalg.eigh(t)
        price = float(tvals[-1])
        if price <= 1.0 + tol * 10.0:
            break
        u_new = tvecs[:, -1]
        overlaps = [abs(np.vdot(u_new, u)) for u in directions]
        if overlaps and max(overlaps) > 1.0 - 1e-12:
            break  # no fresh direction: accept the current certificate
        directions.append(u_new)
    else:
        raise NoConvergence("column generation exceeded its round budget")
    z = sol.dual / max(price, 1.0)  # dual feasible against *every* state
    obj = sol.objective
    density = np.zeros((mside, mside), dtype=complex)
    for wgt, u in zip(sol.weights, directions):
        density += wgt * np.outer(u, u.conj())
    if obj > 0:
        density = hermitian_part(density / obj)
    else:
        density = np.eye(mside, dtype=complex) / mside
    lower = float(np.vdot(z, hermitian_part(gram)).real)
    return DominationCertificate(
        value=float(np.sqrt(max(obj, 0.0))),
        measure=density,
        dual=z,
        gap=abs(obj - lower),
        objective=obj,
        slack=sol.slack,
        side=side,
    )


# ---------------------------------------------------------------------------
# sampled matrix-level norms


def _batched_opnorm(mats: np.ndarray) -> np.ndarray:
    return np.linalg.svd(mats, compute_uv=False)[..., 0]


def _level_samples(psi: SubspaceMap, rows: int, cols: int, samples: int, rng) -> np.ndarray:
    return rng.standard_normal((samples, rows, cols, psi.size)) + 1j * rng.standard_normal(
        (samples, rows, cols, psi.size)
    )


def _domain_norms(psi: SubspaceMap, coeffs: np.ndarray) -> np.ndarray:
    vals = psi.domain_values(coeffs)  # functions: (..., rows, cols, N); matrices: (..., rows, cols, m, m)
    if psi.kind == "functions":
        pointwise = np.moveaxis(vals, -1, 1)  # (samples, N, rows, cols)
        return _batched_opnorm(pointwise).max(axis=1)
    s, rows, cols, mside, _ = vals.shape
    big = vals.transpose(0, 1, 3, 2, 4).reshape(s, rows * mside, cols * mside)
    return _batched_opnorm(big)


def cb_level_norm(
    psi: SubspaceMap,
    side: str,
    rows: int,
    cols: int,
    samples: int = 50,
    seed: int = 0,
) -> float:
    """Sampled lower bound for the matrix-level norm of ``psi`` at (rows, cols).

    Random coefficient tensors are normalized to domain norm one (grid
    evaluation) and pushed through the map; the row reading takes the Gram
    square root across columns, the column reading stacks columns.  Levels are
    nested: the bound at (rows, cols) is the running maximum over column
    counts up to ``cols`` (zero-padding embeds lower levels), so it is
    monotone in ``cols``.  Deterministic per seed.
    """
    if side not in ("row", "column"):
        raise ValueError("side must be 'row' or 'column'")
    if rows < 1 or cols < 1 or samples < 1:
        raise ValueError("rows, cols and samples must be positive")
    best = 0.0
    for level in range(1, cols + 1):
        rng = np.random.default_rng((seed, rows, level))
        coeffs = _level_samples(psi, rows, level, samples, rng)
        dom = _domain_norms(psi, coeffs)
        good = dom > 1e-12
        if not good.any():
            continue
        coeffs = coeffs[good] / dom[good, None, None, None]
        imgs = psi.image_vectors(coeffs)  # (s, rows, level, hdim)
        if side == "row":
            gram = np.einsum("suvh,swvh->suw", imgs, imgs.conj())
            top = np.linalg.eigvalsh(
                0.5 * (gram + np.conj(np.swapaxes(gram, 1, 2)))
            )[..., -1]
            norms = np.sqrt(np.clip(top, 0.0, None))
        else:
            s, m_rows, m_cols, hdim = imgs.shape
            stacked = imgs.transpose(0, 1, 3, 2).reshape(s, m_rows * hdim, m_cols)
            norms = _batched_opnorm(stacked)
        best = max(best, float(norms.max(initial=0.0)))
    return best
