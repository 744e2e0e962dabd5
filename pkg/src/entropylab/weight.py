"""Symmetric Pollaczek weight, its decomposition and the external field.

The weight on [-1, 1] with unit mass is

    w(x) = 2^(2 lam) (lam + a) / (2 pi Gamma(2 lam)) (1 - x^2)^(lam - 1/2)
           * exp((2 arccos x - pi) t) |Gamma(lam + i t)|^2,   t = a x / sqrt(1 - x^2).

It is handled in log space throughout.  Writing ``w = w0 * exp(s)`` with
``w0 = exp(-2 pi |t|)`` isolates the essential singularity at the endpoints;
the smooth remainder ``s`` is assembled from terms that stay O(1) as |x| -> 1
(see :func:`entropylab.specfun.log_abs_gamma_sq_scaled`), so neither part suffers
cancellation.

Most functions come in two flavours: one taking ``x`` and one taking the
angle ``theta`` with ``x = cos(theta)``.  The angular form keeps full relative
precision in ``1 - x^2 = sin(theta)^2`` right up to the endpoints and is what
the integrators use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orthopoly import PollaczekParams
from .specfun import (digamma_imag_defect, log_abs_gamma_sq_scaled, log_gamma,
                      trigamma)

__all__ = [
    "FieldClassReport",
    "log_weight_constant",
    "log_weight",
    "log_weight_theta",
    "w0_log",
    "s_value",
    "s_value_theta",
    "s_endpoint",
    "s_prime_scaled",
    "s_prime_scaled_theta",
    "Q",
    "Q_prime",
    "Q_double_prime",
    "Q_double_prime_at_zero",
    "T",
    "H",
    "validate_field_class",
]

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)
_Q_SERIES_CUTOFF = 0.25


def log_weight_constant(params: PollaczekParams) -> float:
    """``log(2^(2 lam) (lam + a) / (2 pi Gamma(2 lam)))``."""
    lam, a = params.lam, params.a
    return (2 * lam * math.log(2.0) + math.log(lam + a) - math.log(2 * math.pi)
            - float(log_gamma(2 * lam)))


def _check_open(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0) or np.any(np.isnan(x)):
        raise ValueError("x must lie in the open interval (-1, 1)")
    return x


def _angle_parts(x):
    """(|x|, sqrt(1 - x^2), arccos|x|) with endpoint-safe evaluation."""
    ax = np.abs(x)
    sq = np.sqrt((1.0 - ax) * (1.0 + ax))
    acos = 2.0 * np.arcsin(np.sqrt(0.5 * (1.0 - ax)))
    return ax, sq, acos


def _theta_parts(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > np.pi)):
        raise ValueError("theta must lie in [0, pi]")
    st = np.sin(theta)
    ct = np.cos(theta)
    acos = np.where(theta <= 0.5 * np.pi, theta, np.pi - theta)
    return np.abs(ct), st, acos


def _s_from_parts(ax, sq, acos, params: PollaczekParams):
    lam, a = params.lam, params.a
    # endpoint entries come out as nan/inf here; callers overwrite them
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = a * ax / sq
        out = log_weight_constant(params) + (2 * lam - 1) * np.log(sq)
        if a > 0:
            out = out + 2.0 * t * acos + log_abs_gamma_sq_scaled(lam, t)
        else:
            out = out + 2.0 * float(log_gamma(lam))
    return out, t


def s_value_theta(theta, params: PollaczekParams):
    """``s(cos theta)``; finite at theta = 0, pi when a > 0."""
    ax, st, acos = _theta_parts(theta)
    s, _ = _s_from_parts(ax, st, acos, params)
    if params.a > 0:
        s = np.where(st == 0.0, s_endpoint(params), s)
    return s[()]


def log_weight_theta(theta, params: PollaczekParams):
    """``log w(cos theta)``; ``-inf`` at the endpoints (unless a = 0, lam = 1/2)."""
    ax, st, acos = _theta_parts(theta)
    s, t = _s_from_parts(ax, st, acos, params)
    if params.a > 0:
        with np.errstate(invalid="ignore"):
            out = s - 2 * np.pi * t
        out = np.where(st == 0.0, -np.inf, out)
    else:
        out = s
    return out[()]


def log_weight(x, params: PollaczekParams):
    """``log w(x)`` for |x| < 1."""
    x = _check_open(x)
    ax, sq, acos = _angle_parts(x)
    s, t = _s_from_parts(ax, sq, acos, params)
    return (s - 2 * np.pi * t)[()]


def w0_log(x, params: PollaczekParams):
    """``log w0(x) = -2 pi a |x| / sqrt(1 - x^2)``; ``-inf`` at |x| = 1 for a > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    if params.a == 0:
        return np.zeros_like(x)[()]
    ax, sq, _ = _angle_parts(x)
    with np.errstate(divide="ignore"):
        return np.where(sq == 0.0, -np.inf, -2 * np.pi * params.a * ax / sq)[()]


def s_endpoint(params: PollaczekParams) -> float:
    """Limit of ``s`` at x = +-1.

    For a > 0 this is ``log(2^(2 lam) (lam + a) a^(2 lam - 1) e^(2a) / Gamma(2 lam))``.
    For a = 0, ``s = log w`` and the limit is ``-inf`` (lam > 1/2), ``+inf``
    (lam < 1/2) or ``log(1/2)`` (lam = 1/2).
    """
    lam, a = params.lam, params.a
    if a > 0:
        return (2 * lam * math.log(2.0) + math.log(lam + a) + (2 * lam - 1) * math.log(a)
                + 2 * a - float(log_gamma(2 * lam)))
    if lam == 0.5:
        return math.log(0.5)
    return -math.inf if lam > 0.5 else math.inf


def s_value(x, params: PollaczekParams):
    """``s(x) = log w(x) - log w0(x)``, continuous on [-1, 1] when a > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    ax, sq, acos = _angle_parts(x)
    s, _ = _s_from_parts(ax, sq, acos, params)
    return np.where(sq == 0.0, s_endpoint(params), s)[()]


def s_prime_scaled_theta(theta, params: PollaczekParams):
    """``(1 - x^2) s'(x)`` at ``x = cos theta`` for theta in (0, pi/2]."""
    lam, a = params.lam, params.a
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    st = np.sin(theta)
    out = -2.0 * x * (lam - 0.5) - 2.0 * a * x
    if a > 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(st == 0.0, 1.0, theta / st)
            t = a * x / st
            defect = digamma_imag_defect(lam, t)
            out = out + 2 * a * ratio - 2 * (a / st) * defect
        out = np.where(st == 0.0, 0.0, out)
    return out[()]


def s_prime_scaled(x, params: PollaczekParams):
    """``(1 - x^2) s'(x)``, odd in x; tends to 0 at +-1 when a > 0."""
    x = np.asarray(x, dtype=float)
    theta = 2.0 * np.arcsin(np.sqrt(0.5 * (1.0 - np.abs(x))))
    return (np.sign(x) * s_prime_scaled_theta(theta, params))[()]


def _field_parts(x, one_minus_sq):
    x = _check_open(x)
    if one_minus_sq is None:
        ax, sq, _ = _angle_parts(x)
        return x, ax, sq, sq * sq
    one_m = np.asarray(one_minus_sq, dtype=float)
    return x, np.abs(x), np.sqrt(one_m), one_m


def Q_prime(x, params: PollaczekParams, one_minus_sq=None):
    """Derivative of the external field ``Q = -1/2 log(w / w(0))``.

    ``one_minus_sq`` may carry an accurately computed ``1 - x^2`` when the
    caller has one (x very close to +-1).
    """
    lam, a = params.lam, params.a
    x, ax, sq, one_m = _field_parts(x, one_minus_sq)
    out = (lam - 0.5 + a) * x / one_m
    if a > 0:
        t = a * ax / sq
        # arcsin|x| + Im psi(lam + i t)  with  Im psi = pi/2 + defect
        acc = np.arcsin(ax) + 0.5 * np.pi + digamma_imag_defect(lam, t)
        acc = np.where(ax == 0.0, 0.0, acc)
        out = out + np.sign(x) * a * acc / (one_m * sq)
    return out[()]


def Q_double_prime_at_zero(params: PollaczekParams) -> float:
    lam, a = params.lam, params.a
    return lam - 0.5 + 2 * a + a * a * float(np.real(trigamma(lam)))


def Q_double_prime(x, params: PollaczekParams, one_minus_sq=None):
    """Second derivative of the external field (even in x)."""
    lam, a = params.lam, params.a
    x, ax, sq, one_m = _field_parts(x, one_minus_sq)
    out = (lam - 0.5) * (1 + x * x) / one_m ** 2
    if a > 0:
        t = a * ax / sq
        im_psi = 0.5 * np.pi + digamma_imag_defect(lam, t)
        im_psi = np.where(ax == 0.0, 0.0, im_psi)
        re_tri = np.real(trigamma(lam + 1j * t))
        out = (out + a * (x * x + 2) / one_m ** 2
               + 3 * a * ax / (one_m ** 2 * sq) * (np.arcsin(ax) + im_psi)
               + a * a / one_m ** 3 * re_tri)
    return out[()]


def _Q_direct(x, params: PollaczekParams):
    ax, sq, acos = _angle_parts(x)
    s, t = _s_from_parts(ax, sq, acos, params)
    s0, _ = _s_from_parts(np.zeros(1), np.ones(1), np.full(1, 0.5 * np.pi), params)
    return -0.5 * (s - 2 * np.pi * t - s0[0])


def Q(x, params: PollaczekParams):
    """External field ``-1/2 log(w(x)/w(0))``.

    Near the origin it is obtained by integrating Q' (16-point Gauss) to keep
    relative precision where Q ~ x^2.
    """
    x = _check_open(x)
    ax = np.abs(np.atleast_1d(x)).astype(float)
    out = np.empty_like(ax)
    small = ax < _Q_SERIES_CUTOFF
    if np.any(small):
        xs = ax[small]
        nodes = 0.5 * xs[:, None] * (1.0 + _GL16_X[None, :])
        vals = Q_prime(nodes.ravel(), params).reshape(nodes.shape)
        out[small] = 0.5 * xs * (vals @ _GL16_W)
    if np.any(~small):
        out[~small] = _Q_direct(ax[~small], params)
    return out.reshape(np.shape(x))[()]


def T(x, params: PollaczekParams):
    """``x Q'(x) / Q(x)``; returns the limit 2 at x = 0."""
    x = _check_open(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = x * Q_prime(x, params) / Q(x, params)
    return np.where(x == 0.0, 2.0, out)[()]


def H(x, params: PollaczekParams):
    """``Q Q'' / Q'^2``; returns the limit 1/2 at x = 0."""
    x = _check_open(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        qp = Q_prime(x, params)
        out = Q(x, params) * Q_double_prime(x, params) / (qp * qp)
    return np.where(x == 0.0, 0.5, out)[()]


@dataclass
class FieldClassReport:
    """Sampled check of the convexity/growth conditions a)-f) on Q."""

    params: PollaczekParams
    grid: np.ndarray
    min_Qpp: float
    empirical_Lambda: float
    H_range: tuple
    quasi_monotone_constant: float
    passed: dict

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


def validate_field_class(params: PollaczekParams, grid_size: int = 256) -> FieldClassReport:
    """Sample Q', Q'', T and H on a Chebyshev-spaced grid of (0, 1 - 1e-8].

    Q' is odd and Q'', T, H are even, so the positive half determines the
    report for (-1, 1).
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    k = np.arange(1, grid_size + 1)
    x = np.cos(0.5 * np.pi * (grid_size + 1 - k) / (grid_size + 1))
    x = np.minimum(x, 1.0 - 1e-8)
    qp = Q_prime(x, params)
    qpp = Q_double_prime(x, params)
    q = Q(x, params)
    tt = T(x, params)
    hh = H(x, params)
    qpp_all = np.append(qpp, Q_double_prime_at_zero(params))
    finite = bool(np.all(np.isfinite(qp)) and np.all(np.isfinite(qpp)))
    # largest ratio T(x)/T(y) over x < y on the grid
    running_max = np.maximum.accumulate(tt)
    quasi = float(np.max(running_max / tt))
    lam_emp = float(min(np.min(tt), 2.0))
    h_lo, h_hi = float(np.min(hh)), float(np.max(hh))
    passed = {
        "a": finite and abs(float(Q_prime(np.array(0.0), params))) == 0.0,
        "b": bool(np.all(qpp_all > 0)),
        "c": bool(np.all(qp > 0) and q[-1] > q[len(q) // 2]
                  and (params.a > 0 or params.lam > 0.5)),
        "d": bool(np.isfinite(quasi) and lam_emp > 1.0),
        "e": bool(np.isfinite(h_hi) and h_hi < np.inf),
        "f": bool(h_lo > 0),
    }
    return FieldClassReport(params=params, grid=x, min_Qpp=float(np.min(qpp_all)),
                            empirical_Lambda=lam_emp, H_range=(h_lo, h_hi),
                            quasi_monotone_constant=quasi, passed=passed)
