import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgsusy.core import (
    InvalidParameters,
    Model,
    ModelParams,
    asymptotic_potential,
    effective_potential,
    effective_potential_generic,
    log_cosh,
    mass_at,
    sech2,
    vector_potential_at,
)

finite = dict(allow_nan=False, allow_infinity=False)
param_st = st.builds(
    ModelParams,
    model=st.sampled_from(list(Model)),
    mu=st.floats(0.0, 3.0, **finite),
    lam=st.floats(0.1, 5.0, **finite),
    eta=st.floats(-3.0, 3.0, **finite),
    alpha=st.floats(0.1, 3.0, **finite),
    hbar=st.floats(0.3, 3.0, **finite),
    c=st.floats(0.3, 5.0, **finite),
)


def test_linear_examples():
    p = ModelParams(Model.LINEAR, mu=1, lam=1, eta=0)
    assert effective_potential(p, 0.0, 0.0) == 1.0
    assert effective_potential(p, 0.0, 2.0) == 5.0
    q = p.with_(eta=1.0)
    assert effective_potential(q, 1.0, 1.0) == pytest.approx(2.0 + 2j)


def test_hyperbolic_examples():
    p = ModelParams(Model.HYPERBOLIC, mu=1, lam=2, eta=0, alpha=1)
    # well depth: V(0) = mu^2 c^2 - E^2/c^2
    assert effective_potential(p, 0.0, 0.0) == pytest.approx(1.0)
    assert effective_potential(p, 0.0, 40.0).real == pytest.approx(5.0)
    assert asymptotic_potential(p, 0.0) == pytest.approx(5.0)
    assert math.isinf(asymptotic_potential(p.with_(model=Model.LINEAR), 0.0))


def test_profiles():
    p = ModelParams(Model.HYPERBOLIC, mu=1, lam=2, eta=0.5, alpha=1)
    assert vector_potential_at(p, 0.0) == 0
    assert abs(vector_potential_at(p, 50.0)) == pytest.approx(0.5)
    assert np.all(np.isfinite(mass_at(p, np.array([-800.0, 0.0, 800.0]))))


def test_overflow_safe_helpers():
    y = np.array([-1000.0, -1.0, 0.0, 1.0, 1000.0])
    assert np.allclose(log_cosh(y)[1:4], np.log(np.cosh(y[1:4])))
    assert log_cosh(y)[0] == pytest.approx(1000 - math.log(2))
    assert np.all(sech2(y)[[0, -1]] == 0.0)


@pytest.mark.parametrize("bad", [
    dict(lam=0.0), dict(lam=-1.0), dict(mu=-0.1), dict(hbar=0.0), dict(c=-1.0),
    dict(eta=math.nan), dict(mu=math.inf),
])
def test_invalid_parameters(bad):
    with pytest.raises(InvalidParameters):
        ModelParams(Model.LINEAR, **bad)


def test_hyperbolic_needs_alpha():
    with pytest.raises(InvalidParameters):
        ModelParams(Model.HYPERBOLIC, alpha=0.0)


@settings(max_examples=100, deadline=None)
@given(param_st, st.floats(-5, 5, **finite))
def test_pt_symmetry(p, energy):
    x = np.linspace(-4, 4, 41)
    v = effective_potential(p, energy, x)
    assert np.allclose(v, np.conj(v[::-1]), rtol=1e-13, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(param_st, st.floats(-5, 5, **finite))
def test_closed_form_matches_generic_assembly(p, energy):
    x = np.linspace(-5, 5, 31)
    a = effective_potential(p, energy, x)
    b = effective_potential_generic(p, energy, x)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-10 * (1 + np.max(np.abs(a))))


def test_alpha_to_zero_second_order():
    # the hyperbolic potential approaches the linear one as O(alpha^2)
    base = ModelParams(Model.LINEAR, mu=1, lam=1.5, eta=0.7)
    x = np.linspace(-2, 2, 21)
    ref = effective_potential(base, 1.3, x)
    alphas = np.array([0.04, 0.02, 0.01])
    devs = [np.max(np.abs(effective_potential(base.with_(model=Model.HYPERBOLIC, alpha=a), 1.3, x) - ref))
            for a in alphas]
    order = np.polyfit(np.log(alphas), np.log(devs), 1)[0]
    assert order == pytest.approx(2.0, abs=0.05)
