import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgsusy import oracle, susy
from kgsusy.core import Model, ModelParams, effective_potential

finite = dict(allow_nan=False, allow_infinity=False)
param_st = st.builds(
    ModelParams,
    model=st.sampled_from(list(Model)),
    mu=st.floats(0.0, 3.0, **finite),
    lam=st.floats(0.2, 5.0, **finite),
    eta=st.floats(-3.0, 3.0, **finite),
    alpha=st.floats(0.2, 2.0, **finite),
    hbar=st.floats(0.5, 2.0, **finite),
    c=st.floats(0.5, 3.0, **finite),
)
LIN = ModelParams(Model.LINEAR, mu=1, lam=1, eta=0)
HYP = ModelParams(Model.HYPERBOLIC, mu=1, lam=2, eta=0.5, alpha=1)


def test_leading_coefficients():
    assert susy.solve_leading_coefficient(LIN.with_(lam=3, eta=4)) == 5.0
    # B(B + hbar alpha^2) = lam^2 + eta^2
    b = susy.solve_leading_coefficient(HYP)
    assert b * (b + 1) == pytest.approx(4.25, rel=1e-15)


@settings(max_examples=100, deadline=None)
@given(param_st, st.floats(-5, 5, **finite))
def test_shape_invariance_property(p, energy):
    desc = susy.Superpotential(p, energy)
    try:
        rep = susy.verify_shape_invariance(desc, np.linspace(-5, 5, 25))
    except susy.SingularShift:
        assert susy.max_level(p) == 0 and p.eta * energy != 0
        return
    assert rep.passed


@settings(max_examples=50, deadline=None)
@given(param_st, st.floats(0.1, 5, **finite))
def test_v_minus_is_shifted_effective_potential(p, energy):
    desc = susy.Superpotential(p, energy)
    x = np.linspace(-3, 3, 13)
    v_minus, _ = susy.partner_potentials(desc, x)
    v = effective_potential(p, energy, x)
    assert np.allclose(v - susy.ground_energy(desc), v_minus, atol=1e-10 * (1 + np.max(np.abs(v))))


def test_shape_invariance_negative_control():
    desc = susy.Superpotential(HYP, 2.0)
    with pytest.raises(susy.ShapeInvarianceViolation):
        susy.verify_shape_invariance(desc, np.linspace(-3, 3, 11), a2=desc.coefficient)
    lin = susy.Superpotential(LIN.with_(eta=1.0), 2.0)
    with pytest.raises(susy.ShapeInvarianceViolation):
        susy.verify_shape_invariance(lin, np.linspace(-3, 3, 11), a2=lin.coefficient + 0.1)


def test_shape_invariance_at_zero_shifted_coefficient():
    # B = hbar alpha^2 exactly: a2 = 0 with no imaginary offset at E = 0
    p = ModelParams(Model.HYPERBOLIC, lam=1, eta=1, alpha=1)
    desc = susy.Superpotential(p, 0.0)
    assert desc.coefficient == pytest.approx(1.0)
    assert susy.verify_shape_invariance(desc, np.linspace(-2, 2, 5)).passed


def test_singular_shift_is_reported():
    # lam^2 = 1.75, eta = 0.5 gives B = hbar alpha^2 = 1, so a2 = 0
    p = ModelParams(Model.HYPERBOLIC, lam=math.sqrt(1.75), eta=0.5, alpha=1)
    with pytest.raises(susy.SingularShift):
        susy.verify_shape_invariance(susy.Superpotential(p, 1.0), [0.0, 1.0])


def test_empty_samples_rejected():
    with pytest.raises(ValueError):
        susy.verify_shape_invariance(susy.Superpotential(LIN), [])


def test_epsilon_examples():
    assert [susy.epsilon_n(LIN, n, 0.0) for n in range(4)] == pytest.approx([2, 4, 6, 8], abs=1e-14)
    p = ModelParams(Model.HYPERBOLIC, lam=2, eta=0, alpha=1)
    assert susy.max_level(p) == 1
    with pytest.raises(ValueError):
        susy.epsilon_n(p, 2, 0.0)
    spec = susy.epsilon_spectrum(susy.Superpotential(p), 5)
    assert spec.truncated and len(spec.levels) == 2


def test_strict_level_cap_at_integer_k():
    # lam^2 = 2 gives B = 1 = hbar alpha^2, so k = 1 and only n = 0 survives
    p = ModelParams(Model.HYPERBOLIC, lam=math.sqrt(2), eta=0, alpha=1)
    assert susy.solve_leading_coefficient(p) == pytest.approx(1.0, rel=1e-15)
    assert susy.max_level(p) == 0


@settings(max_examples=60, deadline=None)
@given(param_st, st.floats(-4, 4, **finite), st.integers(0, 8))
def test_accumulation_matches_telescoped_form(p, energy, n):
    cap = susy.max_level(p)
    if cap is not None and n > cap:
        return
    acc = susy.epsilon_n(p, n, energy)
    closed = susy.epsilon_closed_form(p, n, energy)
    assert acc == pytest.approx(closed, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("params,energy", [(LIN.with_(eta=0.8), 1.7), (HYP, 2.0)])
def test_ground_state_annihilated_by_lowering(params, energy):
    desc = susy.Superpotential(params, energy)
    x = np.linspace(-3, 3, 31)
    psi, dpsi, _ = susy.ground_state(desc)(x)
    assert np.max(np.abs(susy.apply_lowering(desc, x, psi, dpsi))) <= 1e-13 * np.max(np.abs(psi))


@pytest.mark.parametrize("params,energy", [(LIN.with_(eta=0.8), 1.7), (HYP, 2.0)])
def test_ground_state_solves_partner_equation(params, energy):
    desc = susy.Superpotential(params, energy)
    x = np.linspace(-3, 3, 31)
    psi, _, d2 = susy.ground_state(desc)(x)
    v_minus, _ = susy.partner_potentials(desc, x)
    res = -params.hbar**2 * d2 + v_minus * psi
    assert np.max(np.abs(res)) <= 1e-12 * np.max(np.abs(psi))


def test_raising_operator_matches_hermite_state():
    # for eta = 0, B psi_0(a_2) is proportional to H_1(x) exp(-x^2 / 2)
    desc = susy.Superpotential(LIN)
    x = np.linspace(-2, 2, 17)
    x = x[np.abs(x) > 1e-9]
    psi, dpsi = susy.ground_state(desc.next())(x)[:2]
    ratio = susy.apply_raising(desc, x, psi, dpsi) / (2 * x * np.exp(-x * x / 2))
    assert np.ptp(ratio.real) <= 1e-8 * abs(ratio[0]) and np.max(np.abs(ratio.imag)) <= 1e-12


@pytest.mark.parametrize("params,energy,n", [(LIN.with_(eta=0.6), 1.5, 3), (HYP.with_(lam=5, eta=0.3), 3.0, 2)])
def test_excited_state_eigen_equation(params, energy, n):
    desc = susy.Superpotential(params, energy)
    x = np.linspace(-3, 3, 41)
    psi, _, d2 = susy.excited_state(desc, n, x)
    v = effective_potential(params, energy, x)
    eps = susy.epsilon_n(params, n, energy)
    res = -params.hbar**2 * d2 + (v - eps) * psi
    assert np.max(np.abs(res)) <= 1e-10 * np.max(np.abs(psi)) * (1 + abs(eps))


def test_partner_spectra_degenerate_on_grid():
    # V+ (a_1) shares V-(a_1)'s spectrum except the zero ground level
    desc = susy.Superpotential(ModelParams(Model.HYPERBOLIC, lam=5, eta=0, alpha=1))
    minus = oracle.eigen_spectrum(oracle.discretize_potential(
        lambda x: susy.partner_potentials(desc, x)[0], 15.0, 1601), 4).real
    plus = oracle.eigen_spectrum(oracle.discretize_potential(
        lambda x: susy.partner_potentials(desc, x)[1], 15.0, 1601), 3).real
    assert abs(minus[0]) < 5e-3
    assert np.allclose(minus[1:], plus, rtol=2e-3)
