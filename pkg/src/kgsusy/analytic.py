"""Closed-form bound states of both models and their limiting cases."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .core import Model, ModelParams, effective_potential, log_cosh
from .susy import max_level, solve_leading_coefficient, strict_floor

PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
DEFAULT_LINEAR_LEVELS = 10


class InadmissibleLevel(ValueError):
    """Requested level does not exist for these parameters."""


class DegenerateLevel(UserWarning):
    """Energy denominator vanished (eta^2 == (B - n hbar alpha^2)^2)."""


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    energy_plus: float
    model: Model
    branch: str = "plus"

    def __post_init__(self):
        if self.branch not in ("plus", "minus"):
            raise ValueError(f"branch must be 'plus' or 'minus', got {self.branch!r}")

    @property
    def energy_minus(self) -> float:
        return -self.energy_plus

    @property
    def energy(self) -> float:
        return self.energy_plus if self.branch == "plus" else -self.energy_plus


@dataclass(frozen=True)
class LevelBounds:
    """Level caps; ``None`` means unbounded, -1 means no level at all."""

    n_max_effective: int | None
    n_max_physical: int | None
    constraint_satisfied: bool

    @property
    def count(self) -> int | None:
        if self.n_max_physical is None:
            return None
        return self.n_max_physical + 1


def level_bounds(params: ModelParams) -> LevelBounds:
    if params.model is Model.LINEAR:
        return LevelBounds(None, None, True)
    step = params.hbar * params.alpha**2
    b = solve_leading_coefficient(params)
    physical = max(strict_floor((b - abs(params.eta)) / step), -1)
    satisfied = params.lam**2 > step * abs(params.eta)
    return LevelBounds(max_level(params), physical, satisfied)


def energy_value(params: ModelParams, n: int) -> float:
    """Positive-branch energy of level n without admissibility filtering.

    Returns nan when the level has no real energy.
    """
    c, hb = params.c, params.hbar
    if params.model is Model.LINEAR:
        a = solve_leading_coefficient(params)
        return a / params.lam * math.sqrt(params.mu**2 * c**4 + (2 * n + 1) * hb * c**2 * a)
    al = params.alpha
    b = solve_leading_coefficient(params)
    d = b - n * hb * al**2
    # (B(B + hbar al^2) - d^2) / al^2 rewritten to avoid cancellation at small al
    num = params.mu**2 * c**4 + c**2 * (b * (2 * n + 1) * hb - (n * hb * al) ** 2)
    den = 1.0 - (params.eta / d) ** 2
    if abs(den) <= 1e-14:
        warnings.warn(f"level {n} has a vanishing energy denominator", DegenerateLevel)
        return math.nan
    q = num / den
    return math.sqrt(q) if q > 0 else math.nan


def bound_energies(params: ModelParams, branch: str = "plus", n_max: int | None = None):
    """Admissible bound-state energies.

    The linear model has infinitely many levels; ``n_max`` (default
    ``DEFAULT_LINEAR_LEVELS``) cuts the list. The hyperbolic model is
    restricted to its physical cap, optionally further cut by ``n_max``.
    An empty list means there are no bound states.
    """
    bounds = level_bounds(params)
    if bounds.n_max_physical is None:
        top = DEFAULT_LINEAR_LEVELS if n_max is None else n_max
    else:
        top = bounds.n_max_physical if n_max is None else min(n_max, bounds.n_max_physical)
    levels = []
    for n in range(top + 1):
        e = energy_value(params, n)
        if math.isfinite(e):
            levels.append(SpectrumLevel(n, e, params.model, branch))
    return levels


def level(params: ModelParams, n: int, branch: str = "plus") -> SpectrumLevel:
    bounds = level_bounds(params)
    if n < 0 or (bounds.n_max_physical is not None and n > bounds.n_max_physical):
        raise InadmissibleLevel(
            f"level {n} not admissible (physical cap {bounds.n_max_physical})"
        )
    e = energy_value(params, n)
    if not math.isfinite(e):
        raise InadmissibleLevel(f"level {n} has no real energy")
    return SpectrumLevel(n, e, params.model, branch)


def rest_subtracted_energy(params: ModelParams, n: int) -> float:
    """E_n - mu c^2 on the positive branch, free of cancellation at large c."""
    if params.model is not Model.LINEAR:
        return energy_value(params, n) - params.mu * params.c**2
    c, hb, lam = params.c, params.hbar, params.lam
    a = solve_leading_coefficient(params)
    rest = params.mu * c**2
    k = (2 * n + 1) * hb * c**2 * a
    root = math.sqrt(rest**2 + k)
    # (A/lam - 1) root + (root - mu c^2)
    return params.eta**2 / (lam * (a + lam)) * root + k / (root + rest)


def special_case_massless(params: ModelParams, n_max: int = DEFAULT_LINEAR_LEVELS, branch="plus"):
    """Linear model at mu = 0: E_n = (c/lam) sqrt((2n+1) hbar A^3)."""
    if params.model is not Model.LINEAR or params.mu != 0:
        raise ValueError("massless special case needs the linear model with mu = 0")
    a = solve_leading_coefficient(params)
    return [
        SpectrumLevel(n, params.c / params.lam * math.sqrt((2 * n + 1) * params.hbar * a**3),
                      params.model, branch)
        for n in range(n_max + 1)
    ]


# ---------------------------------------------------------------------------
# Wavefunctions


@dataclass(frozen=True)
class WavefunctionSpec:
    """Normalized PT-symmetric eigenfunction of one level.

    Calling the object evaluates psi_n(x). For the linear model ``center``
    is the complex shift i eta E_n / (c A^2); for the hyperbolic model
    ``a_n`` and ``b_n = conj(a_n)`` are the Jacobi exponents.
    """

    params: ModelParams
    level: SpectrumLevel
    normalization: float
    log_normalization: float
    phase_exponent: int
    coefficient: float
    center: complex = 0j
    a_n: complex = 0j
    b_n: complex = 0j

    @property
    def n(self) -> int:
        return self.level.n

    @property
    def model(self) -> Model:
        return self.params.model

    @property
    def phase(self) -> complex:
        return PHASES[self.phase_exponent]

    def __call__(self, x):
        return self.derivatives(x)[0]

    def derivatives(self, x):
        """(psi, psi', psi'') with exact derivatives."""
        x = np.asarray(x, dtype=float)
        n = self.n
        if self.model is Model.LINEAR:
            kappa = math.sqrt(self.coefficient / self.params.hbar)
            u = kappa * (x + self.center)
            g = self.phase * np.exp(self.log_normalization - u * u / 2)
            h = specfun.hermite(n, u)
            h1 = specfun.hermite_derivative(n, u, 1)
            h2 = specfun.hermite_derivative(n, u, 2)
            psi = g * h
            d1 = kappa * g * (h1 - u * h)
            d2 = kappa**2 * g * (h2 - 2 * u * h1 + (u * u - 1) * h)
            return psi, d1, d2
        al = self.params.alpha
        r, s = self.a_n.real, self.a_n.imag
        y = al * x
        t = np.tanh(y)
        g = self.phase * np.exp(self.log_normalization - r * log_cosh(y) - 1j * s * y)
        p = specfun.jacobi(n, self.a_n, self.b_n, t)
        p1 = specfun.jacobi_derivative(n, self.a_n, self.b_n, t, 1)
        p2 = specfun.jacobi_derivative(n, self.a_n, self.b_n, t, 2)
        w = 1 - t * t
        phi1 = -al * (r * t + 1j * s)
        phi2 = -r * al**2 * w
        t1 = al * w
        t2 = -2 * al**2 * t * w
        psi = g * p
        d1 = g * (phi1 * p + p1 * t1)
        d2 = g * ((phi1 * phi1 + phi2) * p + 2 * phi1 * p1 * t1 + p2 * t1 * t1 + p1 * t2)
        return psi, d1, d2

    def default_rule(self) -> specfun.QuadratureRule:
        """Quadrature rule wide enough for psi^2 to fall below ~1e-16."""
        n = self.n
        if self.model is Model.LINEAR:
            kappa = math.sqrt(self.coefficient / self.params.hbar)
            half = (math.sqrt(2 * n + 1) + 12.0) / kappa
            osc = kappa**2 * abs(self.center.imag)
            panel = min(1.0 / kappa, math.pi / osc if osc > 0 else math.inf)
            return specfun.QuadratureRule.for_scale(half, panel)
        al = self.params.alpha
        r, s = self.a_n.real, abs(self.a_n.imag)
        half = (45.0 / (2 * r) + 1.0 + math.log(2.0)) / al
        panel = min(1.0 / al, 1.0 / (al * math.sqrt(r)), math.pi / (al * s) if s > 0 else math.inf)
        return specfun.QuadratureRule.for_scale(half, panel)

    def pt_norm(self, rule: specfun.QuadratureRule | None = None) -> complex:
        """Quadrature of int psi^2 dx; should equal (-1)^n."""
        rule = rule or self.default_rule()
        return specfun.quadrature_integrate(lambda x: self(x) ** 2, rule)

    def pt_asymmetry(self, x) -> float:
        """max |psi(x) - conj(psi(-x))| over the given points."""
        x = np.asarray(x, dtype=float)
        return float(np.max(np.abs(self(x) - np.conj(self(-x)))))


def hyperbolic_exponent(params: ModelParams, n: int, energy: float) -> complex:
    """a_n = d/(hbar al^2) + i eta E / (al hbar c d), with d = B - n hbar al^2."""
    hb, al = params.hbar, params.alpha
    d = solve_leading_coefficient(params) - n * hb * al**2
    return complex(d / (hb * al**2), params.eta * energy / (al * hb * params.c * d))


def wavefunction(params: ModelParams, lvl: SpectrumLevel | int, branch: str = "plus") -> WavefunctionSpec:
    """Normalized wavefunction for an admissible level (or level index)."""
    if isinstance(lvl, int):
        lvl = level(params, lvl, branch)
    else:
        level(params, lvl.n, lvl.branch)  # admissibility
    n, E = lvl.n, lvl.energy
    coef = solve_leading_coefficient(params)
    if params.model is Model.LINEAR:
        hb = params.hbar
        log_norm = 0.25 * math.log(coef / (math.pi * hb)) - 0.5 * (
            n * math.log(2.0) + math.lgamma(n + 1)
        )
        center = 1j * params.eta * E / (params.c * coef**2)
        return WavefunctionSpec(params, lvl, math.exp(log_norm), log_norm, n % 4, coef, center=center)
    a = hyperbolic_exponent(params, n, E)
    r = a.real
    if r <= 0:
        raise InadmissibleLevel(f"level {n} is not normalizable (Re a_n = {r})")
    log_norm = (
        math.log(abs(a))
        + 0.5 * (math.log(params.alpha) + math.lgamma(n + 1) + specfun.log_gamma(2 * r + n + 1).real)
        - r * math.log(2.0)
        - 0.5 * math.log(r)
        - specfun.log_gamma(a + n + 1).real
    )
    return WavefunctionSpec(
        params, lvl, math.exp(log_norm), log_norm, n % 4, coef, a_n=a, b_n=a.conjugate()
    )


def ode_residual(spec: WavefunctionSpec, x) -> float:
    """max |-hbar^2 psi'' + V_{E_n} psi| / max |psi| with exact derivatives."""
    psi, _, d2 = spec.derivatives(x)
    v = effective_potential(spec.params, spec.level.energy, x)
    res = -spec.params.hbar**2 * d2 + v * psi
    return float(np.max(np.abs(res)) / np.max(np.abs(psi)))


# ---------------------------------------------------------------------------
# Limits


def _fit_order(scale, deviation) -> float:
    """Slope of log(deviation) against log(scale)."""
    scale = np.asarray(scale, dtype=float)
    deviation = np.asarray(deviation, dtype=float)
    if len(scale) < 2 or np.any(deviation <= 0):
        return math.nan
    return float(np.polyfit(np.log(scale), np.log(deviation), 1)[0])


@dataclass
class LimitRow:
    parameter: float
    n: int
    value: float
    target: float
    deviation: float
    extra: dict = field(default_factory=dict)


@dataclass
class LimitReport:
    name: str
    rows: list
    orders: dict

    def order(self, n: int = 0) -> float:
        return self.orders[n]


def nonrelativistic_limit_check(mu, omega, xi, c_sequence, levels=(0,), hbar=1.0) -> LimitReport:
    """Compare E_n - mu c^2 with (n + 1/2) hbar omega as c grows.

    Uses lam = mu omega and eta = mu xi / c. Each row also records the
    energy difference to the xi = 0 case at the same c (``xi_shift``).
    """
    rows, orders = [], {}
    for n in levels:
        devs = []
        target = (n + 0.5) * hbar * omega
        for c in c_sequence:
            p = ModelParams(Model.LINEAR, mu=mu, lam=mu * omega, eta=mu * xi / c, hbar=hbar, c=c)
            p0 = p.with_(eta=0.0)
            val = rest_subtracted_energy(p, n)
            shift = val - rest_subtracted_energy(p0, n)
            dev = abs(val - target)
            devs.append(dev)
            rows.append(LimitRow(float(c), n, val, target, dev, {"xi_shift": shift}))
        orders[n] = _fit_order(1.0 / np.asarray(c_sequence, dtype=float), devs)
    return LimitReport("nonrelativistic", rows, orders)


def alpha_limit_check(params: ModelParams, alpha_sequence, levels=(0, 1), x=None) -> LimitReport:
    """Compare hyperbolic-model levels with the linear model as alpha -> 0.

    Rows carry the energy deviation; ``extra`` holds the max pointwise
    wavefunction deviation on ``x`` (default 241 points on [-6, 6]) and
    the number of admissible levels at that alpha.
    """
    if x is None:
        x = np.linspace(-6.0, 6.0, 241)
    lin = params.with_(model=Model.LINEAR)
    rows, orders = [], {}
    for n in levels:
        e_lin = energy_value(lin, n)
        psi_lin = wavefunction(lin, n)(x)
        devs = []
        for al in alpha_sequence:
            p = params.with_(model=Model.HYPERBOLIC, alpha=al)
            bounds = level_bounds(p)
            e = energy_value(p, n)
            dev = abs(e - e_lin)
            try:
                wdev = float(np.max(np.abs(wavefunction(p, n)(x) - psi_lin)))
            except InadmissibleLevel:
                wdev = math.nan
            devs.append(dev)
            rows.append(LimitRow(float(al), n, e, e_lin, dev,
                                 {"wave_deviation": wdev, "levels": bounds.count}))
        orders[n] = _fit_order(alpha_sequence, devs)
    return LimitReport("alpha", rows, orders)
