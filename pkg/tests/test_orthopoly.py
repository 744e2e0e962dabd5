import math
import threading

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropylab.orthopoly import (PollaczekParams, RecurrenceCoefficients, beta_over_gamma,
                                  beta_over_gamma_asymptotic, coefficient, evaluate,
                                  evaluate_pn, log_leading_gamma, zeros)


def test_params_validation():
    with pytest.raises(ValueError):
        PollaczekParams(0.0, 1.0)
    with pytest.raises(ValueError):
        PollaczekParams(1.0, -0.1)
    assert PollaczekParams(1, 0).theorem_range
    assert not PollaczekParams(0.6, 1).theorem_range


@pytest.mark.parametrize("n, lam, a, expected", [
    (1, 1.0, 1.0, 0.5 * math.sqrt(2 / 6)),
    (1, 0.5, 0.0, 1 / math.sqrt(3)),
])
def test_coefficient_examples(n, lam, a, expected):
    assert coefficient(n, PollaczekParams(lam, a)) == pytest.approx(expected, abs=1e-10)


def test_coefficient_limit():
    assert abs(coefficient(10 ** 6, PollaczekParams(5, 5)) - 0.5) < 1e-5
    k = np.arange(1, 2000)
    a = coefficient(k, PollaczekParams(5, 5))
    assert np.max(np.abs(a - 0.5) * k) < 10


def test_coefficient_rejects_zero_index():
    with pytest.raises(ValueError):
        coefficient(0, PollaczekParams(1, 1))


def test_evaluate_small_degrees():
    params = PollaczekParams(1, 1)
    c = RecurrenceCoefficients(params)
    b = evaluate(0.0, 2, c)
    assert b.value(0) == 1.0
    assert b.value(2) == pytest.approx(-c[1] / c[2], rel=1e-15)


def test_legendre_endpoint_value():
    b = evaluate(1.0, 3, RecurrenceCoefficients(PollaczekParams(0.5, 0)))
    # orthonormal w.r.t. the unit-mass weight 1/2: p_n(1) = sqrt(2n + 1)
    assert b.value(3) == pytest.approx(math.sqrt(7), abs=1e-12)


def test_chebyshev_u_closed_form():
    c = RecurrenceCoefficients(PollaczekParams(1, 0))
    th = np.linspace(0.1, 3.0, 7)
    for n in (1, 5, 40):
        st_ = evaluate_pn(np.cos(th), n, c)
        got = np.ldexp(st_.p, st_.exponent)
        np.testing.assert_allclose(got, np.sin((n + 1) * th) / np.sin(th), atol=1e-11)


def test_derivative_matches_finite_difference():
    c = RecurrenceCoefficients(PollaczekParams(5, 5))
    x, h = 0.37, 1e-6
    b = evaluate(x, 30, c, with_derivative=True)
    fd = (evaluate(x + h, 30, c).value() - evaluate(x - h, 30, c).value()) / (2 * h)
    assert b.derivative() == pytest.approx(fd, rel=1e-6)


def test_high_degree_stays_finite():
    c = RecurrenceCoefficients(PollaczekParams(5, 5))
    st_ = evaluate_pn(np.array([0.0, 0.5, 0.999999, 1.0]), 5000, c)
    assert np.all(np.isfinite(st_.p))
    assert np.all(np.isfinite(st_.exponent))


def test_evaluate_rejects_outside():
    with pytest.raises(ValueError):
        evaluate(1.5, 3, RecurrenceCoefficients(PollaczekParams(1, 1)))


def test_custom_provider():
    c = RecurrenceCoefficients(provider=lambda k: np.full(k.shape, 0.5))
    z = zeros(4, c)
    np.testing.assert_allclose(z, np.cos(np.arange(4, 0, -1) * np.pi / 5), atol=1e-14)
    with pytest.raises(ValueError):
        RecurrenceCoefficients(provider=lambda k: -np.ones(k.shape))


def test_cache_is_thread_safe():
    c = RecurrenceCoefficients(PollaczekParams(2, 1), size=2)
    out = []

    def work(n):
        out.append(float(c.upto(n)[n]))

    ts = [threading.Thread(target=work, args=(n,)) for n in range(10, 2000, 97)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    ref = sorted(float(coefficient(n, c.params)) for n in range(10, 2000, 97))
    assert sorted(out) == pytest.approx(ref, rel=1e-15)


@pytest.mark.parametrize("n, lam, a, expected", [
    (1, 0.5, 0.0, math.log(math.sqrt(3))),
    (0, 5.0, 5.0, 0.0),
])
def test_log_leading_gamma_examples(n, lam, a, expected):
    assert log_leading_gamma(n, PollaczekParams(lam, a)) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("lam, a", [(5, 5), (1, 0), (0.6, 1)])
def test_log_leading_gamma_two_formulas(lam, a):
    params = PollaczekParams(lam, a)
    c = RecurrenceCoefficients(params)
    direct = -math.fsum(np.log(c.upto(100)[1:]))
    assert log_leading_gamma(100, params) == pytest.approx(direct, abs=1e-10)


def test_beta_over_gamma_examples():
    c = RecurrenceCoefficients(PollaczekParams(1, 1))
    assert beta_over_gamma(1, c) == 0.0
    assert beta_over_gamma(2, c) == pytest.approx(-1 / 12, rel=1e-15)


def test_beta_over_gamma_asymptotic_examples():
    assert beta_over_gamma_asymptotic(8, PollaczekParams(1, 0)) == pytest.approx(-1.75)
    psi2 = 1 - 0.5772156649015329
    expected = -2.5 + 0.5 * math.log(10) - 0.5 * psi2
    assert beta_over_gamma_asymptotic(10, PollaczekParams(1, 1)) == pytest.approx(expected)


def test_beta_over_gamma_asymptotic_rate():
    # the O(1/n) remainder has constant about 24 for (5, 5)
    params = PollaczekParams(5, 5)
    c = RecurrenceCoefficients(params)
    scaled = [n * abs(beta_over_gamma(n, c) - beta_over_gamma_asymptotic(n, params))
              for n in (100, 500, 2000)]
    assert max(scaled) < 30
    assert scaled[-1] == pytest.approx(scaled[-2], rel=0.05)


def test_zeros_small():
    c = RecurrenceCoefficients(PollaczekParams(1, 1))
    assert zeros(1, c) == pytest.approx([0.0])
    assert zeros(2, c) == pytest.approx([-c[1], c[1]], abs=1e-15)
    u = zeros(4, RecurrenceCoefficients(PollaczekParams(1, 0)))
    ref = np.sort([math.cos(k * math.pi / 5) for k in range(1, 5)])
    np.testing.assert_allclose(u, ref, atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.55, 20), st.floats(0, 20), st.integers(2, 300))
def test_zeros_interlace_and_are_symmetric(lam, a, n):
    c = RecurrenceCoefficients(PollaczekParams(lam, a))
    z, z1 = zeros(n, c), zeros(n + 1, c)
    assert np.all(np.diff(z) > 0)
    assert np.all(np.abs(z) < 1)
    np.testing.assert_array_equal(z, -z[::-1])
    assert np.all(z1[:-1] < z) and np.all(z < z1[1:])


def test_zeros_match_mpmath_eigenvalues():
    params = PollaczekParams(2, 0.5)
    c = RecurrenceCoefficients(params)
    n = 12
    mpmath.mp.dps = 30
    J = mpmath.zeros(n)
    for k in range(1, n):
        J[k - 1, k] = J[k, k - 1] = mpmath.sqrt(
            mpmath.mpf(k) * (k + 2 * params.lam - 1)
            / ((k + params.lam + params.a) * (k + params.lam + params.a - 1))) / 2
    ev = sorted(float(v) for v in mpmath.eigsy(J)[0])
    np.testing.assert_allclose(zeros(n, c), ev, atol=1e-15)
