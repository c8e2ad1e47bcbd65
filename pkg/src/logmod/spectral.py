"""Spectral factorization on the unit circle.

Two routes to writing a positive function as ``|analytic|^2``:

* :func:`fejer_riesz` factors a nonnegative trigonometric polynomial
  ``p(theta) = sum c_k e^(ik theta)`` as ``|q(e^(i theta))|^2`` with ``q`` a
  polynomial whose roots all lie on or outside the unit circle (companion
  matrix rootfinding of ``z^m p(z)``, root-pair selection by modulus).
* :func:`outer_function` exponentiates the analytic completion of
  ``log f / 2`` on a dyadic grid, using the FFT conjugate-function multiplier
  ``-i sign(k)`` with the Nyquist bin zeroed.

Both normalize so the factor is positive at the origin (``q(0) > 0``; for the
outer route the mean of ``log a`` is real).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLeading,
    NoConvergence,
    NotNonnegative,
    NotPositive,
    PrecisionUnreachable,
)

__all__ = [
    "TrigPoly",
    "AnalyticPoly",
    "BoundaryFunction",
    "fejer_riesz",
    "outer_function",
    "logmodular_witness",
    "conjugate_function",
    "analytic_projection",
    "analytic_defect",
]

_CHECK_GRID = 4096
_BOUNDARY_WINDOW = 1e-7
_PERTURBATION = 1e-10


@dataclass(frozen=True)
class TrigPoly:
    """Trigonometric polynomial ``sum_{k=-m}^{m} c_k e^(ik theta)``.

    ``coeffs`` stores ``c_{-m} .. c_m`` (length ``2m + 1``).  Hermitian
    symmetry ``c_{-k} = conj(c_k)`` is required at construction so that the
    polynomial is real on the circle.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coeffs must be a 1-d array of odd length")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs contain non-finite entries")
        scale = 1.0 + float(np.abs(c).max())
        sym = float(np.abs(c - c[::-1].conj()).max())
        if sym > 1e-12 * scale:
            raise ValueError(f"coefficients break Hermitian symmetry by {sym:.3e}")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(-self.degree, self.degree + 1)
        vals = np.exp(1j * np.outer(theta, k)) @ self.coeffs
        return vals.real if theta.ndim else vals.real.reshape(())

    @staticmethod
    def from_factor(q: "AnalyticPoly") -> "TrigPoly":
        """The modulus-squared ``|q|^2`` as a trig polynomial (autocorrelation)."""
        a = q.coeffs
        m = a.size - 1
        c = np.array(
            [np.vdot(a[: a.size - abs(k)], a[abs(k) :]) for k in range(-m, m + 1)]
        )
        c[:m] = c[2 * m : m : -1].conj()  # enforce exact symmetry
        return TrigPoly(c)


@dataclass(frozen=True)
class AnalyticPoly:
    """Polynomial ``q(z) = sum_{k=0}^{m} a_k z^k`` in ascending coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=complex)
        if a.ndim != 1 or a.size == 0 or not np.all(np.isfinite(a)):
            raise ValueError("coeffs must be a finite non-empty 1-d array")
        object.__setattr__(self, "coeffs", a)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.coeffs[::-1], z)

    def on_circle(self, theta) -> np.ndarray:
        return self.evaluate(np.exp(1j * np.asarray(theta, dtype=float)))

    def roots(self) -> np.ndarray:
        if self.degree == 0:
            return np.zeros(0, dtype=complex)
        return np.roots(self.coeffs[::-1])


def _grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def fejer_riesz(p: TrigPoly, tol: float = 1e-9) -> AnalyticPoly:
    """Factor a nonnegative trig polynomial as ``|q|^2`` with outer ``q``.

    Nonnegativity is checked on a 4096-point grid (minimum ``>= -tol``).  The
    roots of ``z^m p(z)`` come in pairs ``(r, 1/conj(r))``; the factor keeps
    the ``m`` roots of largest modulus, so all roots of ``q`` have modulus
    ``>= 1 - 1e-7``.  Root pairs that sit on the circle are split by
    perturbing ``c_0`` upward by ``1e-10 * (1 + ||p||_inf)`` and re-factoring
    once, at a matching cost in the reconstruction residual.  ``q`` is
    normalized so ``q(0)`` is real and positive.
    """
    theta = _grid(_CHECK_GRID)
    vals = p.evaluate(theta)
    sup = float(np.abs(vals).max(initial=0.0))
    if vals.min(initial=0.0) < -tol:
        raise NotNonnegative(f"minimum on the circle is {vals.min():.3e} < -{tol:.1e}")
    m = p.degree
    if m == 0:
        c0 = max(p.coeffs[0].real, 0.0)
        return AnalyticPoly(np.array([np.sqrt(c0)], dtype=complex))
    scale = float(np.abs(p.coeffs).max())
    if abs(p.coeffs[-1]) <= 1e-14 * max(1.0, scale):
        raise DegenerateLeading("top coefficient c_m vanishes")

    def attempt(coeffs: np.ndarray):
        roots = np.roots(coeffs[::-1])  # roots of z^m p(z), highest degree first
        on_circle = np.abs(np.abs(roots) - 1.0) < _BOUNDARY_WINDOW
        return roots, bool(on_circle.any())

    coeffs = p.coeffs.copy()
    roots, boundary = attempt(coeffs)
    if boundary:
        coeffs = coeffs.copy()
        coeffs[m] += _PERTURBATION * (1.0 + sup)
        roots, _ = attempt(coeffs)
    order = np.argsort(-np.abs(roots))
    selected = roots[order[:m]]
    monic = np.poly(selected)  # descending, leading 1
    magnitude = np.sqrt(abs(coeffs[-1]) / np.prod(np.abs(selected)))
    const = monic[-1]  # product of (-r_j)
    kappa = magnitude * np.exp(-1j * np.angle(const)) if const != 0 else magnitude
    q = AnalyticPoly((kappa * monic)[::-1])
    recon = np.abs(q.on_circle(theta)) ** 2 - vals
    if float(np.abs(recon).max()) > 1e-8 * (1.0 + sup):
        raise NoConvergence(
            f"reconstruction residual {np.abs(recon).max():.3e} exceeds tolerance"
        )
    return q


@dataclass(frozen=True)
class BoundaryFunction:
    """Samples on the dyadic grid ``theta_j = 2 pi j / 2^grid_log2``."""

    grid_log2: int
    values: np.ndarray

    def __post_init__(self):
        if not (0 <= int(self.grid_log2) <= 16):
            raise ValueError("grid_log2 must lie in 0..16")
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1 or v.size != 1 << int(self.grid_log2):
            raise ValueError(
                f"expected {1 << int(self.grid_log2)} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("samples contain non-finite entries")
        object.__setattr__(self, "grid_log2", int(self.grid_log2))
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return 1 << self.grid_log2

    def theta(self) -> np.ndarray:
        return _grid(self.n)

    @staticmethod
    def sample(func, grid_log2: int) -> "BoundaryFunction":
        return BoundaryFunction(grid_log2, np.asarray(func(_grid(1 << grid_log2))))


def _real_positive_samples(f: BoundaryFunction, floor: float = 1e-6) -> np.ndarray:
    vals = f.values
    scale = 1.0 + float(np.abs(vals).max(initial=0.0))
    if float(np.abs(vals.imag).max(initial=0.0)) > 1e-12 * scale:
        raise NotPositive("boundary samples must be real")
    u = vals.real
    if u.min(initial=np.inf) < floor:
        raise NotPositive(f"minimum sample {u.min():.3e} below the {floor:.0e} floor")
    return u


def conjugate_function(u: np.ndarray) -> np.ndarray:
    """Discrete conjugate function: multiplier ``-i sign(k)``, Nyquist zeroed."""
    u = np.asarray(u, dtype=float)
    n = u.size
    spec = np.fft.fft(u)
    mult = np.zeros(n, dtype=complex)
    if n > 1:
        mult[1 : (n + 1) // 2] = -1j
        mult[n // 2 + 1 :] = 1j
    # k = 0 and (for even n) the Nyquist bin stay zero
    return np.fft.ifft(spec * mult).real


def _analytic_half_log(u: np.ndarray) -> np.ndarray:
    """Grid samples of ``(u + i * conj(u)) / 2`` assembled in one FFT pass."""
    n = u.size
    spec = np.fft.fft(u)
    half = np.zeros(n, dtype=complex)
    half[0] = spec[0] / 2.0
    if n > 1:
        half[1 : (n + 1) // 2] = spec[1 : (n + 1) // 2]
        if n % 2 == 0:
            half[n // 2] = spec[n // 2] / 2.0
    return np.fft.ifft(half)


def outer_function(f: BoundaryFunction) -> BoundaryFunction:
    """Outer factor ``a = exp((log f + i (log f)~) / 2)`` on the same grid.

    Requires real samples with minimum ``>= 1e-6`` (:class:`NotPositive`
    otherwise).  By construction ``|a|^2`` reproduces ``f`` exactly at the
    grid points and the mean of ``log a`` is real; closeness of ``a`` to the
    boundary values of a genuinely analytic function improves with grid
    refinement for smooth ``f`` (see :func:`analytic_defect`).
    """
    u = np.log(_real_positive_samples(f))
    return BoundaryFunction(f.grid_log2, np.exp(_analytic_half_log(u)))


def analytic_projection(f: BoundaryFunction) -> BoundaryFunction:
    """Kill the strictly negative frequencies of ``f`` (Nyquist kept)."""
    spec = np.fft.fft(f.values)
    n = f.n
    spec[n // 2 + 1 :] = 0.0
    return BoundaryFunction(f.grid_log2, np.fft.ifft(spec))


def analytic_defect(f: BoundaryFunction) -> float:
    """Sup-norm of the negative-frequency part of ``f`` on its grid."""
    spec = np.fft.fft(f.values)
    n = f.n
    spec[: n // 2 + 1] = 0.0
    return float(np.abs(np.fft.ifft(spec)).max(initial=0.0))


def _upsample_real(u: np.ndarray, n_new: int) -> np.ndarray:
    """Trigonometric interpolation of real samples onto a finer dyadic grid."""
    n = u.size
    if n_new == n:
        return u.copy()
    if n_new % n != 0:
        raise ValueError("refinement must be an integer multiple of the grid")
    spec = np.fft.fft(u)
    padded = np.zeros(n_new, dtype=complex)
    half = n // 2
    padded[:half] = spec[:half]
    if n > 1:
        padded[half] = spec[half] / 2.0
        padded[n_new - half] = spec[half].conj() / 2.0
        if half > 1:
            padded[n_new - half + 1 :] = spec[half + 1 :]
    return np.fft.ifft(padded).real * (n_new / n)


def logmodular_witness(
    f: BoundaryFunction, eps: float, max_log2: int = 16
) -> tuple[BoundaryFunction, float]:
    """Analytic witness ``a`` with ``max_j ||a|^2 - f|  <= eps`` at f's grid.

    Doubles the working grid (spectrally interpolating ``log f``) until the
    analytic projection of the exponentiated half-log meets the target at the
    original sample points, up to ``2^max_log2`` points.  Returns the witness
    together with the achieved error; raises :class:`PrecisionUnreachable`
    when the budget is exhausted.
    """
    u0 = np.log(_real_positive_samples(f))
    target = f.values.real
    best: tuple[BoundaryFunction, float] | None = None
    for lg in range(f.grid_log2, max_log2 + 1):
        n = 1 << lg
        u = _upsample_real(u0, n)
        a = np.exp(_analytic_half_log(u))
        tilde = analytic_projection(BoundaryFunction(lg, a))
        stride = n // f.n
        err = float(np.abs(np.abs(tilde.values[::stride]) ** 2 - target).max())
        if best is None or err < best[1]:
            best = (tilde, err)
        if err <= eps:
            return tilde, err
    raise PrecisionUnreachable(
        f"error {best[1]:.3e} > eps={eps:.1e} at the 2^{max_log2} grid cap"
    )
