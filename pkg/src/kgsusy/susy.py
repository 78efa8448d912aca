"""Superpotentials, partner potentials and shape-invariant spectra.

Both models are solved with the superpotential

    linear:      W(x; a) = a x + i eta E / (c a)
    hyperbolic:  W(x; a) = (a / alpha) tanh(alpha x) + i eta E / (c a)

where ``a`` is the shape-invariance parameter (a_1 = A or B). The partner
potentials are V-/+ = W^2 -/+ hbar W'. The KG energy E is a frozen real
parameter throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Model, ModelParams, effective_potential, log_cosh, sech2


class ShapeInvarianceViolation(AssertionError):
    """Partner potentials failed V+(x; a1) = V-(x; a2) + R(a1)."""


class SingularShift(ValueError):
    """The parameter map reached a = 0 with eta E != 0, where W(x; a) is singular."""


def solve_leading_coefficient(params: ModelParams) -> float:
    """Positive root A (linear) or B (hyperbolic) of the matching condition."""
    if params.model is Model.LINEAR:
        return math.sqrt(params.coupling)
    s = params.hbar * params.alpha**2
    return math.sqrt(params.coupling + s * s / 4) - s / 2


@dataclass(frozen=True)
class Superpotential:
    """Superpotential of one model at a frozen energy E.

    ``coefficient`` is the shape-invariance parameter a_k. It defaults to
    the physical a_1 from :func:`solve_leading_coefficient`, which is always
    positive; descriptors further down the chain (a_k = a_1 - (k-1) step)
    may reach zero or below.
    """

    params: ModelParams
    energy: float = 0.0
    coefficient: float = field(default=None)

    def __post_init__(self):
        if self.coefficient is None:
            object.__setattr__(self, "coefficient", solve_leading_coefficient(self.params))
        object.__setattr__(self, "energy", float(self.energy))
        if not math.isfinite(self.coefficient):
            raise ValueError(f"coefficient must be finite, got {self.coefficient}")

    @property
    def model(self) -> Model:
        return self.params.model

    @property
    def step(self) -> float:
        """a_k - a_{k+1}: zero for the linear model, hbar alpha^2 otherwise."""
        if self.model is Model.LINEAR:
            return 0.0
        return self.params.hbar * self.params.alpha**2

    @property
    def shift(self) -> complex:
        """The constant imaginary part i eta E / (c a)."""
        p = self.params
        return 1j * _ratio(p.eta * self.energy, p.c * self.coefficient)

    def with_coefficient(self, a: float) -> "Superpotential":
        return replace(self, coefficient=float(a))

    def next(self) -> "Superpotential":
        """Apply the parameter map f: a -> a - step."""
        return self.with_coefficient(self.coefficient - self.step)


def _ratio(num: float, den: float) -> float:
    # the imaginary offset vanishes identically when eta E = 0, even at a = 0
    return 0.0 if num == 0 else num / den


def superpotential_at(desc: Superpotential, x):
    x = np.asarray(x, dtype=float)
    a = desc.coefficient
    if desc.model is Model.LINEAR:
        return a * x + desc.shift
    alpha = desc.params.alpha
    return (a / alpha) * np.tanh(alpha * x) + desc.shift


def superpotential_derivative(desc: Superpotential, x):
    x = np.asarray(x, dtype=float)
    if desc.model is Model.LINEAR:
        return np.full_like(x, desc.coefficient)
    return desc.coefficient * sech2(desc.params.alpha * x)


def partner_potentials(desc: Superpotential, x):
    """Return (V-, V+) = (W^2 - hbar W', W^2 + hbar W')."""
    w = superpotential_at(desc, x)
    dw = desc.params.hbar * superpotential_derivative(desc, x)
    return w * w - dw, w * w + dw


def _offset(desc: Superpotential, a: float) -> float:
    """Constant part a^2/alpha^2 - eta^2 E^2 / (c^2 a^2) of the hyperbolic W^2."""
    p = desc.params
    return a * a / p.alpha**2 - _ratio(p.eta * desc.energy, p.c * a) ** 2


def remainder(desc: Superpotential) -> float:
    """R(a_k) for the descriptor's current coefficient."""
    a = desc.coefficient
    if desc.model is Model.LINEAR:
        return 2 * desc.params.hbar * a
    return _offset(desc, a) - _offset(desc, a - desc.step)


def ground_energy(desc: Superpotential) -> float:
    """epsilon_0(E): the constant with V_E - epsilon_0 = V- at a_1."""
    p, E = desc.params, desc.energy
    c = p.c
    if desc.model is Model.LINEAR:
        a = desc.coefficient
        return p.mu**2 * c**2 + p.hbar * a - (p.lam * E / (c * a)) ** 2
    return -_offset(desc, desc.coefficient) + p.coupling / p.alpha**2 + (
        p.mu**2 * c**4 - E**2
    ) / c**2


@dataclass
class ShapeInvarianceReport:
    model: Model
    a1: float
    a2: float
    remainder: float
    max_deviation: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def verify_shape_invariance(desc: Superpotential, samples, tol: float = 1e-10, a2=None):
    """Check V+(x; a1) - V-(x; a2) - R(a1) on ``samples``.

    ``a2`` defaults to the model's parameter map; passing another value is
    a way to build negative controls. Raises :class:`ShapeInvarianceViolation`
    when the deviation exceeds ``tol`` and :class:`SingularShift` when a2 is
    zero while eta E is not.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("samples must be non-empty")
    shifted = desc.next() if a2 is None else desc.with_coefficient(a2)
    p = desc.params
    if abs(shifted.coefficient) <= 1e-12 * abs(desc.coefficient) and p.eta * desc.energy != 0:
        raise SingularShift(
            f"a2 = {shifted.coefficient:.3e}: no partner superpotential exists (level cap is n = 0)"
        )
    r = remainder(desc)
    _, v_plus = partner_potentials(desc, x)
    v_minus, _ = partner_potentials(shifted, x)
    dev = float(np.max(np.abs(v_plus - v_minus - r)))
    report = ShapeInvarianceReport(
        desc.model, desc.coefficient, shifted.coefficient, r, dev, tol, int(x.size)
    )
    if not report.passed:
        raise ShapeInvarianceViolation(
            f"max |V+(a1) - V-(a2) - R| = {dev:.3e} exceeds {tol:.1e} "
            f"(a1={desc.coefficient}, a2={shifted.coefficient})"
        )
    return report


def max_level(params: ModelParams):
    """Largest n with a normalizable level of V_E, or None if unbounded.

    Uses the strict reading of "largest integer below k": an integer k maps
    to k - 1.
    """
    if params.model is Model.LINEAR:
        return None
    k = solve_leading_coefficient(params) / (params.hbar * params.alpha**2)
    return strict_floor(k)


def strict_floor(k: float, rel: float = 1e-12) -> int:
    """Largest integer strictly below k; k within rounding of an integer counts as it."""
    near = round(k)
    if abs(k - near) <= rel * max(1.0, abs(k)):
        return int(near) - 1
    return int(math.ceil(k)) - 1


@dataclass
class EpsilonSpectrum:
    """Algebraic eigenvalues epsilon_n(E) of V_E at a frozen E.

    ``partner`` holds epsilon_n^(-) (the V- spectrum), ``levels`` the
    shifted values epsilon_n = epsilon_n^(-) + epsilon_0.
    """

    energy: float
    levels: list
    partner: list
    a_sequence: list
    remainders: list
    truncated: bool

    @property
    def values(self) -> np.ndarray:
        return np.array([e for _, e in self.levels])


def epsilon_spectrum(desc: Superpotential, n_max_request: int) -> EpsilonSpectrum:
    """Accumulate epsilon_n = epsilon_0 + sum_{k<=n} R(a_k).

    Levels above the model's cap are dropped and ``truncated`` is set.
    """
    if n_max_request < 0:
        raise ValueError("n_max_request must be >= 0")
    cap = max_level(desc.params)
    n_top = n_max_request if cap is None else min(n_max_request, cap)
    eps0 = ground_energy(desc)
    levels, partner, a_seq, rems = [(0, eps0)], [0.0], [desc.coefficient], []
    cur, total = desc, 0.0
    for n in range(1, n_top + 1):
        r = remainder(cur)
        rems.append(r)
        total += r
        cur = cur.next()
        a_seq.append(cur.coefficient)
        partner.append(total)
        levels.append((n, total + eps0))
    return EpsilonSpectrum(
        desc.energy, levels, partner, a_seq, rems, truncated=n_top < n_max_request
    )


def epsilon_n(params: ModelParams, n: int, energy: float) -> float:
    """epsilon_n(E) via shape-invariance accumulation.

    Raises ValueError if ``n`` exceeds the model's level cap.
    """
    spec = epsilon_spectrum(Superpotential(params, energy), n)
    if spec.truncated:
        raise ValueError(f"level {n} is above the cap {max_level(params)}")
    return spec.levels[n][1]


def epsilon_closed_form(params: ModelParams, n: int, energy: float) -> float:
    """Telescoped epsilon_n(E); cross-check for :func:`epsilon_spectrum`."""
    c, E, hb = params.c, float(energy), params.hbar
    if params.model is Model.LINEAR:
        a = solve_leading_coefficient(params)
        return params.mu**2 * c**2 + (2 * n + 1) * hb * a - (params.lam * E / (c * a)) ** 2
    al = params.alpha
    b = solve_leading_coefficient(params)
    d = b - n * hb * al**2
    return (
        b * (b + hb * al**2) / al**2
        + (params.mu**2 * c**4 - E**2) / c**2
        - (d * d / al**2 - (params.eta * E / (c * d)) ** 2)
    )


# ---------------------------------------------------------------------------
# Ground state and ladder operators


def ground_state(desc: Superpotential):
    """Unnormalized exp(-(1/hbar) int_0^x W) with first two derivatives.

    Returns a function ``x -> (psi, dpsi, d2psi)``.
    """
    hb = desc.params.hbar

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        a = desc.coefficient
        if desc.model is Model.LINEAR:
            integral = a * x * x / 2 + desc.shift * x
        else:
            al = desc.params.alpha
            integral = (a / al**2) * log_cosh(al * x) + desc.shift * x
        psi = np.exp(-integral / hb)
        w = superpotential_at(desc, x)
        dw = superpotential_derivative(desc, x)
        dpsi = -w / hb * psi
        d2psi = (w * w / hb**2 - dw / hb) * psi
        return psi, dpsi, d2psi

    return evaluate


def _apply(desc: Superpotential, x, psi, dpsi, sign):
    w = superpotential_at(desc, x)
    return sign * desc.params.hbar * dpsi + w * psi


def apply_raising(desc: Superpotential, x, psi, dpsi):
    """B psi = (-hbar d/dx + W(x; a)) psi, evaluated on samples."""
    return _apply(desc, x, psi, dpsi, -1.0)


def apply_lowering(desc: Superpotential, x, psi, dpsi):
    """A psi = (hbar d/dx + W(x; a)) psi, evaluated on samples."""
    return _apply(desc, x, psi, dpsi, +1.0)


def excited_state(desc: Superpotential, n: int, x):
    """psi_n(x; a_1) = B(a_1) ... B(a_n) psi_0(x; a_{n+1}), unnormalized.

    Built by repeated application of the raising operator, carrying exact
    first derivatives through the chain with the identity
    (B psi)' = -hbar psi'' + W' psi + W psi'.
    The second derivative at each stage comes from the partner equation
    -hbar^2 psi'' + V-(a_k) psi = eps^(-) psi.
    """
    x = np.asarray(x, dtype=float)
    chain = [desc]
    for _ in range(n):
        chain.append(chain[-1].next())
    top = chain[-1]
    psi, dpsi, d2psi = ground_state(top)(x)
    level_energy = 0.0
    hb = desc.params.hbar
    # walk down from a_{n+1} to a_1; at each step psi is an eigenfunction of
    # H-(a_{k+1}) with eigenvalue level_energy
    for k in range(n - 1, -1, -1):
        d = chain[k]
        w = superpotential_at(d, x)
        dw = superpotential_derivative(d, x)
        new = -hb * dpsi + w * psi
        dnew = -hb * d2psi + dw * psi + w * dpsi
        level_energy += remainder(d)
        v_minus, _ = partner_potentials(d, x)
        d2new = (v_minus - level_energy) * new / hb**2
        psi, dpsi, d2psi = new, dnew, d2new
    return psi, dpsi, d2psi
