"""Finite-difference oracle for the Schrodinger-like problem at frozen E.

The operator -hbar^2 d^2/dx^2 + V_E(x) is discretized with the 3-point
stencil on a uniform symmetric grid with Dirichlet walls at +-L, and its
spectrum is computed densely. Nothing here uses the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvals_banded, eigvalsh_tridiagonal
from scipy.optimize import brentq

from .core import Model, ModelParams, asymptotic_potential, effective_potential
from .susy import epsilon_n as closed_epsilon
from .susy import solve_leading_coefficient

DEFAULT_POINTS = 801
MAX_POINTS = 2001


class ConvergenceFailure(RuntimeError):
    pass


class NoSignChange(ValueError):
    """epsilon_n(E) does not change sign on the bracket: no bound state there."""


@dataclass(frozen=True)
class GridProblem:
    """Dense discretization of -hbar^2 d^2/dx^2 + V on [-L, L]."""

    half_width: float
    num_points: int
    energy: float
    x: np.ndarray
    potential: np.ndarray
    hbar: float
    stencil: int = 3
    params: ModelParams | None = None

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / (self.num_points - 1)

    @property
    def interior(self) -> np.ndarray:
        return self.x[1:-1]

    def matrix(self) -> np.ndarray:
        m = self.num_points - 2
        h2 = self.spacing**2
        k = self.hbar**2 / h2
        dtype = np.result_type(self.potential, float)
        mat = np.zeros((m, m), dtype=dtype)
        idx = np.arange(m)
        if self.stencil == 3:
            mat[idx, idx] = 2 * k
            mat[idx[:-1], idx[:-1] + 1] = -k
            mat[idx[1:], idx[1:] - 1] = -k
        else:
            # 5-point stencil; the value beyond the wall is taken as zero
            mat[idx, idx] = 2.5 * k
            mat[idx[:-1], idx[:-1] + 1] = -4 * k / 3
            mat[idx[1:], idx[1:] - 1] = -4 * k / 3
            mat[idx[:-2], idx[:-2] + 2] = k / 12
            mat[idx[2:], idx[2:] - 2] = k / 12
        mat[idx, idx] += self.potential[1:-1]
        return mat

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply the operator to samples on all grid points; interior result."""
        v = np.asarray(values)
        k = self.hbar**2 / self.spacing**2
        lap = v[:-2] - 2 * v[1:-1] + v[2:]
        return -k * lap + self.potential[1:-1] * v[1:-1]


def default_half_width(params: ModelParams, energy: float) -> float:
    if params.model is Model.LINEAR:
        a = solve_leading_coefficient(params)
        return 10 * math.sqrt(params.hbar / a) + abs(params.eta * energy / (params.c * a * a))
    return 20.0 / params.alpha


def grid(half_width: float, num_points: int) -> np.ndarray:
    if num_points < 3 or num_points % 2 == 0:
        raise ValueError("num_points must be odd and >= 3")
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    x = np.linspace(-half_width, half_width, num_points)
    # exact mirror symmetry
    x = 0.5 * (x - x[::-1])
    return x


def discretize_potential(potential, half_width: float, num_points: int, hbar: float = 1.0,
                         energy: float = math.nan, stencil: int = 3) -> GridProblem:
    """Discretize -hbar^2 d^2/dx^2 + potential(x) for an arbitrary callable."""
    if stencil not in (3, 5):
        raise ValueError("stencil must be 3 or 5")
    x = grid(half_width, num_points)
    values = np.asarray(potential(x))
    if np.iscomplexobj(values) and not np.any(values.imag):
        values = values.real
    return GridProblem(float(half_width), int(num_points), float(energy), x,
                       values, float(hbar), stencil)


def discretize(params: ModelParams, energy: float, half_width: float | None = None,
               num_points: int = DEFAULT_POINTS, stencil: int = 3) -> GridProblem:
    if half_width is None:
        half_width = default_half_width(params, energy)
    prob = discretize_potential(lambda x: effective_potential(params, energy, x),
                                half_width, num_points, params.hbar, energy, stencil)
    return GridProblem(prob.half_width, prob.num_points, prob.energy, prob.x,
                       prob.potential, prob.hbar, stencil, params)


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.eigenvalues.imag))) if self.eigenvalues.size else 0.0

    @property
    def real(self) -> np.ndarray:
        return self.eigenvalues.real

    def real_levels(self, imag_tol: float) -> np.ndarray:
        """Real parts of the eigenvalues with |imag| <= imag_tol, ascending.

        With an imaginary vector potential the discretized continuum sits at
        complex values whose real parts can lie below the bound states.
        """
        keep = np.abs(self.eigenvalues.imag) <= imag_tol
        return np.sort(self.eigenvalues.real[keep])


def eigen_spectrum(problem: GridProblem, k: int | None = None) -> OracleSpectrum:
    """The k eigenvalues of smallest real part, ordered by (real, imag)."""
    m = problem.num_points - 2
    if problem.num_points > MAX_POINTS:
        raise ValueError(f"grid of {problem.num_points} points exceeds {MAX_POINTS}")
    k = m if k is None else k
    if not 0 < k <= m:
        raise ValueError(f"k must be in 1..{m}")
    try:
        if np.iscomplexobj(problem.potential):
            vals = np.linalg.eigvals(problem.matrix())
        else:
            vals = _real_banded_eigvals(problem, k).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed on a {m}x{m} matrix: {exc}") from exc
    # round tiny imaginary noise only for ordering stability
    order = np.lexsort((np.round(vals.imag, 12), vals.real))
    return OracleSpectrum(vals[order][:k])


def _real_banded_eigvals(problem: GridProblem, k: int) -> np.ndarray:
    # real potential: the operator is symmetric and banded
    m = problem.num_points - 2
    kin = problem.hbar**2 / problem.spacing**2
    pot = problem.potential[1:-1].real
    if problem.stencil == 3:
        return eigvalsh_tridiagonal(2 * kin + pot, np.full(m - 1, -kin),
                                    select="i", select_range=(0, k - 1))
    band = np.zeros((3, m))
    band[0] = 2.5 * kin + pot
    band[1, :-1] = -4 * kin / 3
    band[2, :-2] = kin / 12
    return eigvals_banded(band, lower=True, select="i", select_range=(0, k - 1))


def count_below_threshold(params: ModelParams, energy: float, half_width=None,
                          num_points=DEFAULT_POINTS) -> int:
    """Number of grid eigenvalues with real part below lim Re V_E(x)."""
    thr = asymptotic_potential(params, energy)
    spec = eigen_spectrum(discretize(params, energy, half_width, num_points))
    return int(np.sum(spec.real < thr))


REALITY_TOL = 1e-6


def oracle_epsilon(params: ModelParams, n: int, energy: float, half_width=None,
                   num_points=DEFAULT_POINTS, imag_tol: float = REALITY_TOL,
                   stencil: int = 3) -> float:
    """The n-th real grid eigenvalue of V_E (by ascending value).

    Raises IndexError if fewer than n + 1 real eigenvalues exist.
    """
    prob = discretize(params, energy, half_width, num_points, stencil)
    # a real potential has a real spectrum, so the lowest n + 1 suffice
    k = n + 1 if not np.iscomplexobj(prob.potential) else None
    spec = eigen_spectrum(prob, k)
    levels = spec.real_levels(imag_tol * max(1.0, np.max(np.abs(spec.eigenvalues[:n + 1]))))
    return float(levels[n])


def quantization_root(params: ModelParams, n: int, bracket, epsilon=None,
                      rtol: float = 1e-15, xtol: float = 1e-300) -> float:
    """Solve epsilon_n(E) = 0 on ``bracket``.

    ``epsilon`` is a callable E -> epsilon_n(E); by default the algebraic
    shape-invariance value is used. Pass e.g. ``lambda E: oracle_epsilon(p, n, E)``
    for a fully numerical root; a loose ``xtol`` is then appropriate since
    the grid error dominates.
    """
    if epsilon is None:
        def epsilon(energy):
            try:
                return closed_epsilon(params, n, energy)
            except ValueError as exc:
                raise NoSignChange(str(exc)) from exc
    lo, hi = map(float, bracket)
    f_lo, f_hi = epsilon(lo), epsilon(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange(
            f"epsilon_{n} has the same sign at E={lo} ({f_lo:.3e}) and E={hi} ({f_hi:.3e})"
        )
    return brentq(epsilon, lo, hi, xtol=xtol, rtol=rtol, maxiter=500)


def residual_spacing(params: ModelParams, n: int, fraction: float = 2e-3) -> float:
    """Grid spacing resolving level n: a fraction of its oscillation length."""
    a = solve_leading_coefficient(params)
    length = math.sqrt(params.hbar / a)
    if params.model is Model.HYPERBOLIC:
        length = min(length, params.hbar * params.alpha / a)
    return fraction * length / math.sqrt(2 * n + 1)


def residual_check(spec, num_points: int | None = None, half_width: float | None = None,
                   spacing: float | None = None, energy: float | None = None) -> float:
    """max |FD operator applied to sampled psi_n| / max |psi_n|.

    ``spec`` is an analytic wavefunction (callable with ``params`` and
    ``level``). ``energy`` overrides E_n for negative controls.
    """
    params = spec.params
    E = spec.level.energy if energy is None else energy
    if half_width is None:
        half_width = default_half_width(params, E)
    if spacing is not None:
        num_points = 2 * int(round(half_width / spacing)) + 1
    num_points = num_points or DEFAULT_POINTS
    x = grid(half_width, num_points)
    prob = GridProblem(half_width, num_points, E, x, effective_potential(params, E, x),
                       params.hbar, 3, params)
    psi = spec(x)
    res = prob.apply(psi)
    return float(np.max(np.abs(res)) / np.max(np.abs(psi)))
