"""Extending pattern-algebra representations to positive maps on matrices.

A pattern representation sends the matrix units supported on a (reflexive,
transitive) pattern to operators on C^dim, preserving products and the unit.
For completely contractive representations, each vector h yields a dominating
functional sigma_h on the full matrix algebra; the family h -> sigma_h is
quadratic in h, so polarization reconstructs a sesquilinear matrix-valued
kernel M[s, t] and hence a unital positive extension Phi(b)[s, t] =
tr(M[s, t] b) satisfying a Schwarz-type inequality against the original
representation.  The same polarization machinery is exposed for scalar
quadratic forms, and a Naimark dilation turns POVMs into projective
measurements above an isometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    Infeasible,
    NotHermitian,
    NotPOVM,
    NotQuadratic,
    NotQuadraticFamily,
    NumericalFailure,
    ParallelogramViolation,
)
from .linalg import frobenius, hermitian_part, operator_norm
from .patterns import Pattern

__all__ = [
    "PatternRepresentation",
    "identity_representation",
    "corner_representation",
    "direct_sum",
    "rn_margin",
    "dominating_functional",
    "QuadraticFormOracle",
    "polarization_reconstruct",
    "PositiveMapOnMatrices",
    "ExtensionReport",
    "assemble_positive_map",
    "positive_extension",
    "NaimarkDilation",
    "naimark_dilate",
]


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class PatternRepresentation:
    """Unital multiplicative map from the matrix units of a pattern.

    ``images`` maps each 1-based pair ``(i, j)`` of the pattern to a
    ``(dim, dim)`` complex matrix.  Validation enforces that the pattern is
    transitive, the diagonal images sum to the identity, and products follow
    the matrix-unit rules ``E_ij E_kl = delta_jk E_il`` within 1e-10 of the
    natural scale.
    """

    pattern: Pattern
    dim: int
    images: dict

    def __post_init__(self):
        if not self.pattern.is_transitive():
            raise ValueError("pattern must be transitive")
        if self.dim < 1:
            raise DimensionMismatch("dim must be positive")
        imgs = {}
        for key in self.pattern.pairs:
            if key not in self.images:
                raise ValueError(f"missing image for pair {key}")
            mat = np.asarray(self.images[key], dtype=complex)
            if mat.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"image for {key} has shape {mat.shape}")
            imgs[key] = mat
        if len(self.images) != len(imgs):
            raise ValueError("images contain pairs outside the pattern")
        scale = max(operator_norm(m) for m in imgs.values())
        mtol = 1e-10 * (1.0 + scale) ** 2
        n = self.pattern.n
        total = sum(imgs[(i, i)] for i in range(1, n + 1))
        if frobenius(total - np.eye(self.dim)) > 1e-10 * (1.0 + scale):
            raise ValueError("diagonal images do not sum to the identity")
        for (i, j) in self.pattern.pairs:
            for (k, l) in self.pattern.pairs:
                prod = imgs[(i, j)] @ imgs[(k, l)]
                expect = imgs[(i, l)] if j == k else 0.0
                if frobenius(prod - expect) > mtol:
                    raise ValueError(
                        f"images violate the product rule at {(i, j)} x {(k, l)}"
                    )
        tensor = np.zeros((n, n, self.dim, self.dim), dtype=complex)
        for (i, j), mat in imgs.items():
            tensor[i - 1, j - 1] = mat
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_tensor", tensor)

    @property
    def tensor(self) -> np.ndarray:
        """Images packed as an (n, n, dim, dim) array, zero off the pattern."""
        return self._tensor

    def unit_image(self, i: int, j: int) -> np.ndarray:
        return self.images[(i, j)]

    def apply(self, a: np.ndarray) -> np.ndarray:
        """Evaluate on an algebra element (off-pattern entries are ignored)."""
        a = np.asarray(a, dtype=complex)
        if a.shape != (self.pattern.n, self.pattern.n):
            raise DimensionMismatch("element size does not match the pattern")
        return np.einsum("ij,ijst->st", a * self.pattern.mask(), self._tensor)


def identity_representation(pattern: Pattern) -> PatternRepresentation:
    """The tautological representation: each matrix unit maps to itself."""
    n = pattern.n
    eye = np.eye(n, dtype=complex)
    images = {
        (i, j): np.outer(eye[:, i - 1], eye[:, j - 1]) for (i, j) in pattern.pairs
    }
    return PatternRepresentation(pattern, n, images)


def corner_representation(pattern: Pattern) -> PatternRepresentation:
    """One-dimensional representation reading off the (1, 1) corner.

    Requires index 1 to be equivalent to no other index (otherwise the corner
    reading is not multiplicative and a ValueError is raised).
    """
    n = pattern.n
    for j in range(2, n + 1):
        if (1, j) in pattern and (j, 1) in pattern:
            raise ValueError("index 1 must not be equivalent to another index")
    images = {
        (i, j): np.array([[1.0 + 0.0j]]) if (i, j) == (1, 1) else np.array([[0.0j]])
        for (i, j) in pattern.pairs
    }
    return PatternRepresentation(pattern, 1, images)


def direct_sum(
    rep_a: PatternRepresentation, rep_b: PatternRepresentation
) -> PatternRepresentation:
    """Block-diagonal sum of two representations of the same pattern."""
    if rep_a.pattern != rep_b.pattern:
        raise ValueError("direct sum requires a common pattern")
    da, db = rep_a.dim, rep_b.dim
    images = {}
    for key in rep_a.pattern.pairs:
        block = np.zeros((da + db, da + db), dtype=complex)
        block[:da, :da] = rep_a.images[key]
        block[da:, da:] = rep_b.images[key]
        images[key] = block
    return PatternRepresentation(rep_a.pattern, da + db, images)


# ---------------------------------------------------------------------------
# sampled contractivity margins


def rn_margin(
    rep: PatternRepresentation,
    size: int,
    samples: int = 500,
    seed: int = 0,
    column: bool = False,
) -> float:
    """Sampled margin ``min(1 - ||image block||)`` over unit-norm tuples.

    Tuples ``(a_1, ..., a_size)`` of algebra elements are arranged as a block
    row (or block column when ``column``), normalized to operator norm one,
    and pushed through the representation entrywise.  A completely
    contractive representation keeps the margin nonnegative at every size.
    """
    if size < 1 or samples < 1:
        raise ValueError("size and samples must be positive")
    n = rep.pattern.n
    d = rep.dim
    pairs = rep.pattern.sorted_pairs()
    ri = np.array([i - 1 for (i, _) in pairs])
    ci = np.array([j - 1 for (_, j) in pairs])
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal((samples, size, len(pairs))) + 1j * rng.standard_normal(
        (samples, size, len(pairs))
    )
    blocks = np.zeros((samples, size, n, n), dtype=complex)
    blocks[:, :, ri, ci] = coeff
    if column:
        domain = blocks.reshape(samples, size * n, n)
    else:
        domain = blocks.transpose(0, 2, 1, 3).reshape(samples, n, size * n)
    dnorm = np.linalg.svd(domain, compute_uv=False)[:, 0]
    good = dnorm > 1e-12
    if not good.any():
        return 1.0
    blocks = blocks[good] / dnorm[good, None, None, None]
    imgs = np.einsum("stij,ijab->stab", blocks, rep.tensor)
    if column:
        image_blocks = imgs.reshape(imgs.shape[0], size * d, d)
    else:
        image_blocks = imgs.transpose(0, 2, 1, 3).reshape(imgs.shape[0], d, size * d)
    inorm = np.linalg.svd(image_blocks, compute_uv=False)[:, 0]
    return float(1.0 - inorm.max())


def _require_contractive(rep: PatternRepresentation, tol: float = 1e-8) -> None:
    for column in (False, True):
        margin = rn_margin(rep, 2, samples=300, seed=11, column=column)
        if margin < -tol:
            side = "column" if column else "row"
            raise Infeasible(
                f"representation is not completely contractive "
                f"(sampled {side} margin {margin:.3e})"
            )


# ---------------------------------------------------------------------------
# dominating functionals


def _domination_blocks(rep: PatternRepresentation, h: np.ndarray):
    """Static data for the two domination constraints at vector h."""
    pairs = rep.pattern.sorted_pairs()
    i_idx = np.array([i - 1 for (i, _) in pairs])
    j_idx = np.array([j - 1 for (_, j) in pairs])
    vs = np.stack([rep.images[p] @ h for p in pairs])
    ws = np.stack([rep.images[p].conj().T @ h for p in pairs])
    l_row = vs.conj() @ vs.T
    # the adjoint side conjugates the coefficients of x, transposing the Gram
    l_col = ws @ ws.conj().T
    eqi = i_idx[:, None] == i_idx[None, :]
    eqj = j_idx[:, None] == j_idx[None, :]
    return i_idx, j_idx, eqi, eqj, l_row, l_col


def _feasibility_state(sigma, i_idx, j_idx, eqi, eqj, l_row, l_col):
    """Min eigenpair of each of the three psd constraints at sigma."""
    m_row = eqi * sigma[np.ix_(j_idx, j_idx)].T - l_row
    n_col = eqj * sigma[np.ix_(i_idx, i_idx)] - l_col
    out = []
    for mat in (sigma, hermitian_part(m_row), hermitian_part(n_col)):
        vals, vecs = np.linalg.eigh(mat)
        out.append((float(vals[0]), vecs[:, 0]))
    return out


def _free_entry_gradient(block, vec, pos, i_idx, j_idx, eqi, eqj):
    """Wirtinger gradient of the active min-eigenvalue in the free entries."""
    a, b = pos
    if block == 0:
        c_ab = np.conj(vec[a]) * vec[b]
        c_ba = np.conj(vec[b]) * vec[a]
    elif block == 1:
        c_ab = c_ba = 0.0
        for k in range(len(i_idx)):
            for l in range(len(i_idx)):
                if not eqi[k, l]:
                    continue
                term = np.conj(vec[k]) * vec[l]
                if j_idx[l] == a and j_idx[k] == b:
                    c_ab += term
                if j_idx[l] == b and j_idx[k] == a:
                    c_ba += term
    else:
        c_ab = c_ba = 0.0
        for k in range(len(i_idx)):
            for l in range(len(i_idx)):
                if not eqj[k, l]:
                    continue
                term = np.conj(vec[k]) * vec[l]
                if i_idx[k] == a and i_idx[l] == b:
                    c_ab += term
                if i_idx[k] == b and i_idx[l] == a:
                    c_ba += term
    # d lambda = c_ab dz + c_ba d conj(z); pack as 2 conj(c_ab) (c_ba = conj(c_ab))
    return 2.0 * np.conj(c_ab)


def _pin_sigma(rep: PatternRepresentation, h: np.ndarray, ctol: float):
    """Entries of sigma forced by the representation; remaining free slots."""
    n = rep.pattern.n
    known = {}
    for (i, j) in rep.pattern.pairs:
        known[(j - 1, i - 1)] = complex(np.vdot(h, rep.images[(i, j)] @ h))
    sigma = np.zeros((n, n), dtype=complex)
    free = []
    for a in range(n):
        val = known[(a, a)]
        if abs(val.imag) > ctol:
            raise Infeasible("pinned diagonal of sigma is not real")
        sigma[a, a] = val.real
    for a in range(n):
        for b in range(a + 1, n):
            k1 = known.get((a, b))
            k2 = known.get((b, a))
            if k1 is not None and k2 is not None:
                if abs(k1 - np.conj(k2)) > ctol:
                    raise Infeasible("pinned data for sigma is not Hermitian-consistent")
                sigma[a, b] = 0.5 * (k1 + np.conj(k2))
            elif k1 is not None:
                sigma[a, b] = k1
            elif k2 is not None:
                sigma[a, b] = np.conj(k2)
            else:
                free.append((a, b))
            sigma[b, a] = np.conj(sigma[a, b])
    return sigma, free


def _sigma_solve(
    rep: PatternRepresentation,
    h: np.ndarray,
    objective: np.ndarray | None = None,
    tol: float = 1e-8,
) -> np.ndarray:
    """Dominating functional at h, assuming contractivity was already vetted."""
    n = rep.pattern.n
    h = np.asarray(h, dtype=complex).reshape(-1)
    if h.shape != (rep.dim,):
        raise DimensionMismatch("vector length does not match the representation")
    hn2 = float(np.vdot(h, h).real)
    if hn2 == 0.0:
        return np.zeros((n, n), dtype=complex)
    scale = max(1.0, max(operator_norm(m) for m in rep.images.values()))
    vtol = tol * (1.0 + hn2) * scale**2
    sigma, free = _pin_sigma(rep, h, vtol)
    i_idx, j_idx, eqi, eqj, l_row, l_col = _domination_blocks(rep, h)

    def worst(sig):
        state = _feasibility_state(sig, i_idx, j_idx, eqi, eqj, l_row, l_col)
        block = int(np.argmin([s[0] for s in state]))
        return state[block][0], block, state[block][1]

    if not free:
        t0, _, _ = worst(sigma)
        if t0 < -vtol:
            raise Infeasible(
                f"no dominating functional: constraint slack {t0:.3e}"
            )
        return sigma

    # free entries: subgradient ascent on the worst constraint slack
    z = np.zeros(len(free), dtype=complex)

    def fill(zvec):
        sig = sigma.copy()
        for (a, b), val in zip(free, zvec):
            sig[a, b] = sigma[a, b] + val
            sig[b, a] = np.conj(sigma[a, b] + val)
        return sig

    best_t, best_z = worst(sigma)[0], z.copy()
    for it in range(1, 401):
        sig = fill(z)
        t_cur, block, vec = worst(sig)
        if t_cur > best_t:
            best_t, best_z = t_cur, z.copy()
        if best_t >= vtol:
            break
        grad = np.array(
            [
                _free_entry_gradient(block, vec, pos, i_idx, j_idx, eqi, eqj)
                for pos in free
            ]
        )
        gn = float(np.linalg.norm(grad))
        if gn < 1e-14:
            break
        z = z + (0.3 * (1.0 + hn2) / np.sqrt(it)) * grad / gn
    if best_t < -vtol:
        raise Infeasible(
            f"no dominating functional: constraint slack {best_t:.3e}"
        )
    sigma = fill(best_z)
    if objective is not None and best_t > vtol:
        obj = hermitian_part(np.asarray(objective, dtype=complex))
        step = 0.1 * (1.0 + hn2)
        for _ in range(100):
            grad = np.array([2.0 * np.conj(obj[a, b]) for (a, b) in free])
            gn = float(np.linalg.norm(grad))
            if gn < 1e-14 or step < 1e-12:
                break
            trial = best_z + step * grad / gn
            if worst(fill(trial))[0] >= -vtol:
                best_z = trial
            else:
                step *= 0.5
        sigma = fill(best_z)
    return sigma


def dominating_functional(
    rep: PatternRepresentation,
    h: np.ndarray,
    objective: np.ndarray | None = None,
    tol: float = 1e-8,
) -> np.ndarray:
    """Positive functional sigma on M_n dominating the representation at h.

    The returned Hermitian psd matrix satisfies, for every family of algebra
    elements ``b_k`` (the pattern's matrix units), the two Gram dominations
    ``[tr(sigma b_k* b_l)] >= [<rho(b_l) h, rho(b_k) h>]`` and the adjoint
    variant, while pinning ``tr(sigma b) = <rho(b) h, h>`` on the pattern.
    Entries not forced by the pattern (incomparable index pairs) are filled
    by maximizing the worst constraint slack; an optional Hermitian
    ``objective`` is then increased over the remaining slack.  Raises
    Infeasible when the representation is detectably non-contractive or the
    constraints cannot be met.
    """
    _require_contractive(rep)
    return _sigma_solve(rep, h, objective=objective, tol=tol)


# ---------------------------------------------------------------------------
# polarization


@dataclass(frozen=True)
class QuadraticFormOracle:
    """Black-box access to a scalar function expected to be a quadratic form."""

    dimension: int
    evaluate: object

    def __call__(self, h: np.ndarray) -> complex:
        return complex(self.evaluate(np.asarray(h, dtype=complex)))


def _polarize(values: dict, s: int, t: int) -> np.ndarray | complex:
    """Combine the four grid evaluations into the (s, t) kernel entry.

    ``values`` maps direction labels to evaluations; labels are
    ``("e", s)`` for basis vectors and ``(s, t, c)`` with ``s < t`` and
    ``c in {1, -1, 1j, -1j}`` for ``e_s + c e_t``.
    """
    if s == t:
        return values[("e", s)]
    if s < t:
        return 0.25 * (
            values[(s, t, 1)]
            - values[(s, t, -1)]
            + 1j * values[(s, t, -1j)]
            - 1j * values[(s, t, 1j)]
        )
    return 0.25 * (
        values[(t, s, 1)]
        - values[(t, s, -1)]
        + 1j * values[(t, s, 1j)]
        - 1j * values[(t, s, -1j)]
    )


def _polarization_grid(dim: int):
    """Direction labels and vectors needed to polarize a quadratic family."""
    eye = np.eye(dim, dtype=complex)
    grid = {("e", s): eye[:, s] for s in range(dim)}
    for s in range(dim):
        for t in range(s + 1, dim):
            for c in (1, -1, 1j, -1j):
                grid[(s, t, c)] = eye[:, s] + c * eye[:, t]
    return grid


def polarization_reconstruct(
    oracle: QuadraticFormOracle, tol: float = 1e-9, seed: int = 0
) -> np.ndarray:
    """Recover the Hermitian matrix of a quadratic form from evaluations.

    Checks scaling, the parallelogram law and boundedness on random samples
    (NotQuadratic on failure), evaluates the polarization grid, and verifies
    the reconstruction against fresh samples within
    ``1e-9 * (1 + ||h||^2) * (1 + ||T||)``.
    """
    d = oracle.dimension
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(60):
        h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        k = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        lam = (rng.standard_normal() + 1j * rng.standard_normal()) * 10.0 ** rng.uniform(
            -1.5, 1.5
        )
        qh = oracle(h)
        local = 1.0 + abs(lam) ** 2 * (1.0 + abs(qh))
        if abs(oracle(lam * h) - abs(lam) ** 2 * qh) > tol * local * 10.0:
            raise NotQuadratic("scaling law fails on sampled vectors")
        qk, qp, qm = oracle(k), oracle(h + k), oracle(h - k)
        par_scale = 1.0 + abs(qh) + abs(qk) + abs(qp) + abs(qm)
        if abs(qp + qm - 2.0 * qh - 2.0 * qk) > tol * par_scale * 10.0:
            raise NotQuadratic("parallelogram law fails on sampled vectors")
        ratios.append(abs(qh) / float(np.vdot(h, h).real))
    ratios = np.array(ratios)
    if ratios.max() > 1e6 * (np.median(ratios) + 1.0):
        raise NotQuadratic("sampled values are not uniformly bounded")
    values = {label: oracle(vec) for label, vec in _polarization_grid(d).items()}
    t_mat = np.array([[_polarize(values, s, t) for t in range(d)] for s in range(d)])
    herm_defect = frobenius(t_mat - t_mat.conj().T)
    if herm_defect > 1e-8 * (1.0 + frobenius(t_mat)):
        raise NotQuadratic("polarized kernel is not Hermitian")
    t_mat = hermitian_part(t_mat)
    t_scale = 1.0 + operator_norm(t_mat)
    for _ in range(50):
        h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        predicted = complex(np.vdot(h, t_mat @ h))
        if abs(predicted - oracle(h)) > 1e-9 * (1.0 + float(np.vdot(h, h).real)) * t_scale:
            raise NotQuadratic("reconstruction mismatch on fresh samples")
    return t_mat


# ---------------------------------------------------------------------------
# positive maps on full matrix algebras


@dataclass(frozen=True, eq=False)
class PositiveMapOnMatrices:
    """Linear map M_n -> M_d stored through its matrix-unit blocks.

    ``choi`` has shape (n*d, n*d) with block (i, j) equal to the image of the
    matrix unit E_ij; it must be Hermitian (the map preserves adjoints).
    """

    input_size: int
    output_dim: int
    choi: np.ndarray

    def __post_init__(self):
        n, d = self.input_size, self.output_dim
        choi = np.asarray(self.choi, dtype=complex)
        if choi.shape != (n * d, n * d):
            raise DimensionMismatch("choi block matrix has the wrong shape")
        defect = frobenius(choi - choi.conj().T)
        if defect > 1e-8 * (1.0 + frobenius(choi)):
            raise NotHermitian("choi block matrix is not Hermitian")
        object.__setattr__(self, "choi", hermitian_part(choi))

    def _blocks(self) -> np.ndarray:
        n, d = self.input_size, self.output_dim
        return self.choi.reshape(n, d, n, d)

    def apply(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=complex)
        if b.shape != (self.input_size, self.input_size):
            raise DimensionMismatch("input matrix has the wrong size")
        return np.einsum("ij,isjt->st", b, self._blocks())

    def unital_error(self) -> float:
        return frobenius(
            self.apply(np.eye(self.input_size)) - np.eye(self.output_dim)
        )

    @property
    def is_unital(self) -> bool:
        return self.unital_error() <= 1e-8 * (1.0 + np.sqrt(self.output_dim))

    def block_positivity_defect(self, samples: int = 200, seed: int = 0) -> float:
        """Min of ``<Phi(xi xi*) eta, eta>`` over random unit pairs (>= 0 ideally)."""
        n, d = self.input_size, self.output_dim
        rng = np.random.default_rng(seed)
        xi = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        eta = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
        xi /= np.linalg.norm(xi, axis=1)[:, None]
        eta /= np.linalg.norm(eta, axis=1)[:, None]
        w = (xi.conj()[:, :, None] * eta[:, None, :]).reshape(samples, n * d)
        vals = np.einsum("sa,ab,sb->s", w.conj(), self.choi, w).real
        return float(vals.min())


@dataclass(frozen=True)
class ExtensionReport:
    """Verification summary attached to an assembled positive extension."""

    extension_error: float
    schwarz_defect: float
    parallelogram_residual: float
    unital_error: float
    positivity_defect: float


def _assemble_kernel(sigmas: dict, dim: int, msize: int, tol_par: float):
    """Polarize a grid of functionals into the kernel tensor M[s, t].

    Returns the (dim, dim, msize, msize) tensor plus the largest
    parallelogram residual; raises ParallelogramViolation when the residual
    exceeds ``tol_par`` times the local scale.
    """
    residual = 0.0
    for s in range(dim):
        for t in range(s + 1, dim):
            base = 2.0 * (sigmas[("e", s)] + sigmas[("e", t)])
            local = 1.0 + frobenius(base)
            for pair in ((1, -1), (1j, -1j)):
                gap = frobenius(
                    sigmas[(s, t, pair[0])] + sigmas[(s, t, pair[1])] - base
                )
                residual = max(residual, gap / local)
                if gap > tol_par * local:
                    raise ParallelogramViolation(
                        f"parallelogram residual {gap:.3e} at directions {s}, {t}"
                    )
    kernel = np.zeros((dim, dim, msize, msize), dtype=complex)
    for s in range(dim):
        kernel[s, s] = hermitian_part(sigmas[("e", s)])
        for t in range(s + 1, dim):
            kernel[s, t] = _polarize(sigmas, s, t)
            kernel[t, s] = kernel[s, t].conj().T
    return kernel, residual


def _kernel_to_choi(kernel: np.ndarray) -> np.ndarray:
    """Choi block matrix with block (i, j) equal to ``tr(M[., .] E_ij)``."""
    dim, _, msize, _ = kernel.shape
    return kernel.transpose(3, 0, 2, 1).reshape(msize * dim, msize * dim)


def assemble_positive_map(
    family,
    matrix_size: int,
    dim: int,
    tol: float = 1e-8,
    seed: int = 0,
) -> PositiveMapOnMatrices:
    """Build the map ``b -> [tr(M[s, t] b)]`` from a quadratic family of functionals.

    ``family(h)`` must return a Hermitian psd ``matrix_size x matrix_size``
    functional depending quadratically on ``h in C^dim``.  Sampled scaling,
    parallelogram and positivity checks guard the construction
    (NotQuadraticFamily on failure); the polarization grid then produces the
    kernel and its Choi block matrix.
    """
    rng = np.random.default_rng(seed)
    for _ in range(40):
        h = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        k = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        lam = (rng.standard_normal() + 1j * rng.standard_normal()) * 10.0 ** rng.uniform(
            -1.0, 1.0
        )
        sh = np.asarray(family(h), dtype=complex)
        if sh.shape != (matrix_size, matrix_size):
            raise DimensionMismatch("family values have the wrong shape")
        scale = 1.0 + frobenius(sh)
        if np.linalg.eigvalsh(hermitian_part(sh))[0] < -tol * scale * 10.0:
            raise NotQuadraticFamily("family values are not positive semidefinite")
        if frobenius(family(lam * h) - abs(lam) ** 2 * sh) > tol * scale * (
            1.0 + abs(lam) ** 2
        ) * 10.0:
            raise NotQuadraticFamily("family does not scale quadratically")
        gap = frobenius(
            np.asarray(family(h + k)) + np.asarray(family(h - k)) - 2.0 * sh
            - 2.0 * np.asarray(family(k))
        )
        if gap > tol * (scale + frobenius(np.asarray(family(k)))) * 20.0:
            raise NotQuadraticFamily("family violates the parallelogram law")
    sigmas = {
        label: np.asarray(family(vec), dtype=complex)
        for label, vec in _polarization_grid(dim).items()
    }
    kernel, _ = _assemble_kernel(sigmas, dim, matrix_size, tol_par=10.0 * tol)
    return PositiveMapOnMatrices(matrix_size, dim, _kernel_to_choi(kernel))


def positive_extension(
    rep: PatternRepresentation,
    schwarz_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-7,
) -> tuple:
    """Extend a completely contractive representation to a positive map on M_n.

    Dominating functionals at the polarization grid of C^dim are combined
    into the kernel M[s, t]; the resulting unital map agrees with the
    representation on the pattern and satisfies the sampled Schwarz
    inequality ``Phi(a* a) >= rho(a)* rho(a)``.  Returns the map together
    with an ExtensionReport of measured defects.
    """
    _require_contractive(rep)
    n = rep.pattern.n
    d = rep.dim
    sigmas = {
        label: _sigma_solve(rep, vec, tol=1e-8)
        for label, vec in _polarization_grid(d).items()
    }
    kernel, residual = _assemble_kernel(sigmas, d, n, tol_par=1e-6)
    phi = PositiveMapOnMatrices(n, d, _kernel_to_choi(kernel))
    scale = 1.0 + max(operator_norm(m) for m in rep.images.values())
    ext_err = max(
        frobenius(phi.apply(_unit(n, i, j)) - rep.images[(i, j)])
        for (i, j) in rep.pattern.pairs
    )
    if ext_err > tol * scale * 10.0:
        raise NumericalFailure(
            f"assembled map fails to extend the representation ({ext_err:.3e})"
        )
    rng = np.random.default_rng(seed)
    pairs = rep.pattern.sorted_pairs()
    ri = np.array([i - 1 for (i, _) in pairs])
    ci = np.array([j - 1 for (_, j) in pairs])
    schwarz = np.inf
    for _ in range(schwarz_samples):
        a = np.zeros((n, n), dtype=complex)
        a[ri, ci] = rng.standard_normal(len(pairs)) + 1j * rng.standard_normal(len(pairs))
        nrm = operator_norm(a)
        if nrm < 1e-12:
            continue
        a /= nrm
        rho_a = rep.apply(a)
        gap = phi.apply(a.conj().T @ a) - rho_a.conj().T @ rho_a
        schwarz = min(schwarz, float(np.linalg.eigvalsh(hermitian_part(gap))[0]))
    if schwarz < -1e-5 * scale**2:
        raise NumericalFailure(f"Schwarz inequality fails by {schwarz:.3e}")
    report = ExtensionReport(
        extension_error=ext_err,
        schwarz_defect=float(schwarz),
        parallelogram_residual=residual,
        unital_error=phi.unital_error(),
        positivity_defect=phi.block_positivity_defect(200, seed + 1),
    )
    return phi, report


def _unit(n: int, i: int, j: int) -> np.ndarray:
    unit = np.zeros((n, n), dtype=complex)
    unit[i - 1, j - 1] = 1.0
    return unit


# ---------------------------------------------------------------------------
# Naimark dilation of POVMs


@dataclass(frozen=True)
class NaimarkDilation:
    """Isometry and orthogonal projections dilating a POVM."""

    isometry: np.ndarray
    projections: tuple
    total_dim: int


def naimark_dilate(effects, rank_tol: float = 1e-9) -> NaimarkDilation:
    """Dilate a POVM to commuting projections above an isometry.

    Each effect is factored as ``B_x* B_x`` through its spectral decomposition
    (eigenvalues below ``rank_tol`` are dropped); stacking the ``B_x`` gives
    an isometry ``V`` with ``V* E_x V = F_x`` for the coordinate-block
    projections ``E_x``.  Raises NotPOVM for non-Hermitian or negative
    effects or when the effects do not sum to the identity, and
    NumericalFailure when the reconstruction drifts beyond 1e-8.
    """
    mats = [np.asarray(f, dtype=complex) for f in effects]
    if not mats:
        raise NotPOVM("a POVM needs at least one effect")
    d = mats[0].shape[0]
    total = np.zeros((d, d), dtype=complex)
    for f in mats:
        if f.shape != (d, d):
            raise NotPOVM("effects must share a common square shape")
        scale = 1.0 + frobenius(f)
        if frobenius(f - f.conj().T) > 1e-10 * scale:
            raise NotPOVM("effect is not Hermitian")
        if np.linalg.eigvalsh(hermitian_part(f))[0] < -1e-10 * scale:
            raise NotPOVM("effect is not positive semidefinite")
        total += f
    if frobenius(total - np.eye(d)) > 1e-10 * (1.0 + np.sqrt(d)):
        raise NotPOVM("effects do not sum to the identity")
    factors = []
    for f in mats:
        vals, vecs = np.linalg.eigh(hermitian_part(f))
        keep = vals > rank_tol * max(1.0, float(vals[-1]))
        factors.append((vecs[:, keep] * np.sqrt(vals[keep])).conj().T)
    total_dim = sum(b.shape[0] for b in factors)
    isometry = np.vstack(factors) if total_dim else np.zeros((0, d), dtype=complex)
    projections = []
    offset = 0
    for b in factors:
        proj = np.zeros((total_dim, total_dim), dtype=complex)
        proj[offset : offset + b.shape[0], offset : offset + b.shape[0]] = np.eye(
            b.shape[0]
        )
        projections.append(proj)
        offset += b.shape[0]
    if frobenius(isometry.conj().T @ isometry - np.eye(d)) > 1e-8 * (1.0 + np.sqrt(d)):
        raise NumericalFailure("dilation isometry drifted from V* V = I")
    recon = max(
        frobenius(isometry.conj().T @ proj @ isometry - f)
        for proj, f in zip(projections, mats)
    )
    if recon > 1e-8 * (1.0 + max(frobenius(f) for f in mats)):
        raise NumericalFailure(f"dilation reconstruction error {recon:.3e}")
    return NaimarkDilation(isometry, tuple(projections), total_dim)
