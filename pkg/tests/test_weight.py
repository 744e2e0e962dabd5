import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from entropylab.orthopoly import PollaczekParams
from entropylab.weight import (H, Q, Q_double_prime, Q_prime, T, log_weight, log_weight_theta,
                               s_endpoint, s_value, s_value_theta, validate_field_class,
                               w0_log)

PARAMS = [PollaczekParams(1, 0), PollaczekParams(1, 1), PollaczekParams(1.5, 0.25),
          PollaczekParams(5, 5), PollaczekParams(0.6, 1)]


def mp_log_weight(x, lam, a):
    x = mpmath.mpf(x)
    t = a * x / mpmath.sqrt(1 - x * x)
    c = mpmath.mpf(2) ** (2 * lam) * (lam + a) / (2 * mpmath.pi * mpmath.gamma(2 * lam))
    return float(mpmath.log(c) + (lam - 0.5) * mpmath.log(1 - x * x)
                 + (2 * mpmath.acos(x) - mpmath.pi) * t
                 + 2 * mpmath.re(mpmath.loggamma(mpmath.mpc(lam, t))))


def test_log_weight_examples():
    assert log_weight(0.0, PollaczekParams(1, 0)) == pytest.approx(math.log(2 / math.pi))
    assert log_weight(0.5, PollaczekParams(0.5, 0)) == pytest.approx(math.log(0.5))
    p = PollaczekParams(1, 1)
    assert log_weight(0.9, p) == pytest.approx(w0_log(0.9, p) + s_value(0.9, p), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.999, 0.999), st.sampled_from(PARAMS))
def test_log_weight_matches_mpmath(x, params):
    mpmath.mp.dps = 30
    ref = mp_log_weight(x, params.lam, params.a)
    assert log_weight(x, params) == pytest.approx(ref, rel=1e-11, abs=1e-11)


@pytest.mark.parametrize("params", PARAMS[:4] + [PollaczekParams(15, 15)])
def test_unit_mass(params):
    val, _ = quad(lambda th: math.exp(log_weight_theta(th, params)) * math.sin(th),
                  0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=400)
    assert abs(val - 1) < 1e-10


def test_endpoint_behaviour():
    p = PollaczekParams(1, 1)
    assert s_value(0.0, p) == pytest.approx(math.log(4 / math.pi), abs=1e-14)
    assert s_endpoint(p) == pytest.approx(math.log(8 * math.e ** 2), abs=1e-13)
    assert s_value_theta(0.0, p) == pytest.approx(math.log(8 * math.e ** 2), abs=1e-13)
    assert s_value(1 - 1e-9, p) == pytest.approx(math.log(8 * math.e ** 2), abs=1e-3)
    assert log_weight_theta(0.0, p) == -np.inf
    with pytest.raises(ValueError):
        log_weight(1.0, p)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.9999), st.sampled_from(PARAMS))
def test_s_and_Q_parity(x, params):
    assert s_value(x, params) == pytest.approx(s_value(-x, params), rel=1e-14, abs=1e-14)
    assert Q(x, params) == pytest.approx(Q(-x, params), rel=1e-13, abs=1e-15)
    assert Q_prime(x, params) == pytest.approx(-Q_prime(-x, params), rel=1e-13, abs=1e-15)


def test_Q_examples():
    p = PollaczekParams(1.5, 0)
    x = np.linspace(-0.99, 0.99, 21)
    assert Q(0.0, PollaczekParams(5, 5)) == 0.0
    np.testing.assert_allclose(Q_prime(x, p), x / (1 - x * x), rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
def test_derivatives_by_finite_difference(params, x):
    h = 1e-5
    fd1 = (Q(x + h, params) - Q(x - h, params)) / (2 * h)
    fd2 = (Q_prime(x + h, params) - Q_prime(x - h, params)) / (2 * h)
    assert Q_prime(x, params) == pytest.approx(fd1, rel=1e-6)
    assert Q_double_prime(x, params) == pytest.approx(fd2, rel=1e-6)


def test_T_H_limits():
    p = PollaczekParams(1, 1)
    assert T(0.0, p) == pytest.approx(2.0)
    assert T(1e-6, p) == pytest.approx(2.0, abs=1e-6)
    assert H(0.0, p) == pytest.approx(0.5)
    assert H(1 - 1e-6, p) == pytest.approx(3.0, abs=1e-2)


def test_field_endpoint_growth():
    p = PollaczekParams(1, 2)
    x = 1 - 1e-6
    assert (1 - x * x) ** 1.5 * Q_prime(x, p) == pytest.approx(2 * math.pi, abs=1e-3)


@pytest.mark.parametrize("params", [PollaczekParams(1, 1), PollaczekParams(5, 0),
                                    PollaczekParams(5, 5)])
def test_field_class_passes(params):
    assert validate_field_class(params).all_passed


def test_field_class_out_of_range_is_informational():
    rep = validate_field_class(PollaczekParams(0.6, 1))
    assert set(rep.passed) == set("abcdef")
    assert rep.empirical_Lambda > 0


def test_field_class_grid_size():
    with pytest.raises(ValueError):
        validate_field_class(PollaczekParams(1, 1), grid_size=10)
