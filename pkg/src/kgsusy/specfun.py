"""Special functions with complex arguments and parameters.

Hermite and Jacobi polynomials by three-term recurrence, a Lanczos
log-Gamma for complex arguments, and composite Gauss-Legendre quadrature
for complex-valued integrands.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class RecurrenceBreakdown(ArithmeticError):
    """Leading coefficient of the Jacobi recurrence vanished."""


class PoleError(ArithmeticError):
    """Gamma evaluated at a non-positive integer."""


class TruncationWarning(UserWarning):
    """Integrand not negligible at the truncation points."""


# ---------------------------------------------------------------------------
# Hermite


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    z = np.asarray(z)
    h_prev = np.ones_like(z, dtype=np.result_type(z, float))
    if n == 0:
        return h_prev if h_prev.ndim else h_prev[()]
    h = 2 * z
    for k in range(1, n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h


def hermite_derivative(n: int, z, order: int = 1):
    """d^order/dz^order H_n(z), from H_n' = 2n H_{n-1}."""
    coef = 1.0
    for j in range(order):
        if n - j <= 0:
            return np.zeros_like(np.asarray(z), dtype=np.result_type(z, float))
        coef *= 2 * (n - j)
    return coef * hermite(n - order, z)


# ---------------------------------------------------------------------------
# Jacobi


def jacobi(n: int, a, b, z):
    """Jacobi polynomial P_n^{(a,b)}(z) for complex a, b, z.

    Uses the standard three-term recurrence. Raises
    :class:`RecurrenceBreakdown` when the coefficient multiplying P_k
    vanishes, which happens only for degenerate parameter combinations
    (k + a + b = 0 or 2k + a + b - 2 = 0).
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    a = complex(a)
    b = complex(b)
    z = np.asarray(z)
    dtype = np.result_type(z, complex)
    p_prev = np.ones_like(z, dtype=dtype)
    if n == 0:
        return p_prev if p_prev.ndim else p_prev[()]
    p = (a + b + 2) * z / 2 + (a - b) / 2
    s = a + b
    for k in range(2, n + 1):
        lead = 2 * k * (k + s) * (2 * k + s - 2)
        scale = 2 * k * (k + abs(s)) * (2 * k + abs(s) + 2)
        if abs(lead) <= 1e-14 * scale:
            raise RecurrenceBreakdown(
                f"Jacobi recurrence degenerate at k={k} for a={a}, b={b}"
            )
        c1 = (2 * k + s - 1) * ((2 * k + s) * (2 * k + s - 2) * z + a * a - b * b)
        c2 = 2 * (k + a - 1) * (k + b - 1) * (2 * k + s)
        p_prev, p = p, (c1 * p - c2 * p_prev) / lead
    return p


def jacobi_derivative(n: int, a, b, z, order: int = 1):
    """d^order/dz^order P_n^{(a,b)}(z) via the parameter-shift identity."""
    a = complex(a)
    b = complex(b)
    coef = 1.0 + 0j
    for j in range(order):
        if n - j <= 0:
            return np.zeros_like(np.asarray(z), dtype=complex)
        coef *= (n - j + a + b + 1 + 2 * j) / 2
    return coef * jacobi(n - order, a + order, b + order, z)


# ---------------------------------------------------------------------------
# log Gamma

# Lanczos approximation, g = 607/128, 15 terms (P. Godfrey's coefficient set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def log_gamma(z) -> complex:
    """Principal-branch log Gamma(z) for complex scalar z.

    Reflection is used for Re z < 1/2. Raises :class:`PoleError` at
    non-positive integers.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real}")
    if z.real < 0.5:
        # log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z); imaginary
        # part only defined mod 2 pi here
        if z.imag == 0:
            s = math.sin(math.pi * z.real)
            val = math.log(math.pi / abs(s)) - log_gamma(1 - z).real
            return complex(val, 0.0 if s > 0 else math.pi)
        return math.log(math.pi) - _log_sin_pi(z) - log_gamma(1 - z)
    w = z - 1
    series = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    val = _HALF_LOG_2PI + (w + 0.5) * cmath.log(t) - t + cmath.log(series)
    if z.imag == 0:
        return complex(val.real, 0.0)
    return val


def _log_sin_pi(z: complex) -> complex:
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}), safe for Im z > 0
    if z.imag < 0:
        return _log_sin_pi(z.conjugate()).conjugate()
    return -1j * math.pi * z + cmath.log(1 - cmath.exp(2j * math.pi * z)) + cmath.log(0.5j)


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


# ---------------------------------------------------------------------------
# Quadrature

GL_ORDER = 32


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    half_width: float

    @classmethod
    def composite(cls, half_width: float, panels: int, order: int = GL_ORDER):
        """Composite Gauss-Legendre rule on [-L, L] with equal panels."""
        if half_width <= 0 or panels < 1:
            raise ValueError("need half_width > 0 and panels >= 1")
        t, w = _gauss_legendre(order)
        edges = np.linspace(-half_width, half_width, panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        rad = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + rad[:, None] * t[None, :]).ravel()
        weights = (rad[:, None] * w[None, :]).ravel()
        return cls(nodes, weights, float(half_width))

    @classmethod
    def for_scale(cls, half_width: float, panel_width: float, order: int = GL_ORDER):
        panels = max(1, int(math.ceil(2 * half_width / panel_width)))
        return cls.composite(half_width, panels, order)


def quadrature_integrate(f, rule: QuadratureRule) -> complex:
    """Integrate a (vectorised) complex function over [-L, L].

    Emits :class:`TruncationWarning` if |f(+-L)| exceeds 1e-10 max|f|.
    """
    values = np.asarray(f(rule.nodes))
    ends = np.abs(np.asarray(f(np.array([-rule.half_width, rule.half_width]))))
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak > 0 and np.max(ends) > 1e-10 * peak:
        warnings.warn(
            f"integrand is {np.max(ends) / peak:.3e} of its peak at +-{rule.half_width}",
            TruncationWarning,
            stacklevel=2,
        )
    return complex(np.dot(rule.weights, values))
