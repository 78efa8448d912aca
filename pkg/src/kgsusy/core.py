"""Model parameters and the Klein-Gordon to Schrodinger-like mapping.

The Klein-Gordon equation with mass profile M(x), vector potential V(x) and
null scalar potential is read as a zero-energy Schrodinger problem
(2m = 1) in the energy-dependent potential

    V_E(x) = [(M(x) c^2 + S(x))^2 - (E - V(x))^2] / c^2,   S = 0.

Two models are supported:

``Model.LINEAR``
    M(x) = sqrt(mu^2 + (lam/c)^2 x^2),  V(x) = i c eta x
``Model.HYPERBOLIC``
    M(x) = sqrt(mu^2 + (lam/(alpha c))^2 tanh^2(alpha x)),
    V(x) = i (c eta / alpha) tanh(alpha x)

All functions accept scalars or numpy arrays for ``x``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np


class Model(str, enum.Enum):
    LINEAR = "linear"
    HYPERBOLIC = "hyperbolic"


class InvalidParameters(ValueError):
    """Raised when a ModelParams instance violates its invariants."""


@dataclass(frozen=True)
class ModelParams:
    """Physical constants and model parameters.

    Parameters
    ----------
    model : Model
        Which mass/potential pair is used.
    mu : float
        Mass at the origin (>= 0).
    lam : float
        Mass-gradient strength (> 0).
    eta : float
        Strength of the imaginary vector potential (any real).
    alpha : float
        Inverse length scale of the hyperbolic model (> 0). Ignored by the
        linear model.
    hbar, c : float
        Action constant and speed of light (> 0). Natural units by default.
    """

    model: Model = Model.LINEAR
    mu: float = 1.0
    lam: float = 1.0
    eta: float = 0.0
    alpha: float = 1.0
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        for name in ("mu", "lam", "eta", "alpha", "hbar", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.lam <= 0:
            raise InvalidParameters(f"lam must be positive, got {self.lam}")
        if self.mu < 0:
            raise InvalidParameters(f"mu must be non-negative, got {self.mu}")
        if self.hbar <= 0 or self.c <= 0:
            raise InvalidParameters("hbar and c must be positive")
        if self.model is Model.HYPERBOLIC and self.alpha <= 0:
            raise InvalidParameters(f"alpha must be positive, got {self.alpha}")

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    @property
    def coupling(self) -> float:
        """lam^2 + eta^2, the combination that sets the confining strength."""
        return self.lam**2 + self.eta**2


def log_cosh(y):
    """log(cosh(y)) without overflow for large |y|."""
    y = np.abs(np.asarray(y, dtype=float))
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def sech2(y):
    """sech(y)^2 without overflow for large |y|."""
    y = np.abs(np.asarray(y, dtype=float))
    e = np.exp(-2.0 * y)
    return 4.0 * e / (1.0 + e) ** 2


def mass_at(params: ModelParams, x):
    x = np.asarray(x, dtype=float)
    if params.model is Model.LINEAR:
        grad = (params.lam / params.c) * x
    else:
        grad = params.lam / (params.alpha * params.c) * np.tanh(params.alpha * x)
    return np.hypot(params.mu, grad)


def vector_potential_at(params: ModelParams, x):
    """Purely imaginary, odd vector potential."""
    x = np.asarray(x, dtype=float)
    if params.model is Model.LINEAR:
        return 1j * params.c * params.eta * x
    return 1j * (params.c * params.eta / params.alpha) * np.tanh(params.alpha * x)


def effective_potential(params: ModelParams, energy: float, x):
    """Closed-form V_E(x) for the selected model.

    For real ``energy`` the result satisfies V_E(x) = conj(V_E(-x)).
    """
    x = np.asarray(x, dtype=float)
    c, E = params.c, float(energy)
    const = (params.mu**2 * c**4 - E**2) / c**2
    if params.model is Model.LINEAR:
        return params.coupling * x**2 + 1j * (2 * params.eta * E / c) * x + const
    a = params.alpha
    y = a * x
    return (
        -params.coupling / a**2 * sech2(y)
        + 1j * (2 * params.eta * E / (a * c)) * np.tanh(y)
        + params.coupling / a**2
        + const
    )


def effective_potential_generic(params: ModelParams, energy: float, x, scalar=0.0):
    """V_E(x) assembled directly from the mass profile and vector potential.

    Kept separate from :func:`effective_potential` so the two can be checked
    against each other. ``scalar`` is S(x) (values or array); the models use 0.
    """
    c = params.c
    m = mass_at(params, x)
    v = vector_potential_at(params, x)
    return ((m * c**2 + scalar) ** 2 - (energy - v) ** 2) / c**2


def asymptotic_potential(params: ModelParams, energy: float) -> float:
    """lim_{|x|->inf} Re V_E(x); finite only for the hyperbolic model."""
    if params.model is Model.LINEAR:
        return math.inf
    c = params.c
    return params.coupling / params.alpha**2 + (params.mu**2 * c**4 - energy**2) / c**2
