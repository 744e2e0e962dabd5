"""Gamma-family functions on the right half-plane.

Every routine shifts the argument upward until ``|z| >= 10`` and then sums a
truncated Stirling-type series.  Results are vectorized over numpy arrays and
kept in log space wherever the caller would otherwise under- or overflow.

Two helpers exist purely for the Pollaczek weight, whose factor
``|Gamma(lam + i t)|^2`` decays like ``exp(-pi |t|)``: :func:`log_abs_gamma_sq_scaled`
returns ``log|Gamma(lam+it)|^2 + pi|t|`` and :func:`digamma_imag_defect` returns
``Im psi(lam+i|t|) - pi/2``, both without the cancellation a naive evaluation
would suffer for ``|t| >> 1``.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "GammaLineArgument",
    "log_gamma_complex",
    "log_gamma",
    "abs_gamma_sq",
    "log_abs_gamma_sq",
    "log_abs_gamma_sq_scaled",
    "digamma",
    "digamma_imag_defect",
    "trigamma",
    "pochhammer_log",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286061
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SHIFT_RADIUS = 10.0

# B_2 .. B_18
_BERNOULLI = np.array([
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
])
_K = np.arange(1, len(_BERNOULLI) + 1)
# log-gamma:  sum B_2k / (2k (2k-1) z^(2k-1))
_LG_COEF = _BERNOULLI / (2 * _K * (2 * _K - 1))
# digamma:    - sum B_2k / (2k z^2k)
_DG_COEF = _BERNOULLI / (2 * _K)
# trigamma:   sum B_2k / z^(2k+1)
_TG_COEF = _BERNOULLI


class GammaLineArgument:
    """A point ``lam + i t`` on a vertical line in the right half-plane."""

    __slots__ = ("lam", "t")

    def __init__(self, lam: float, t: float = 0.0):
        if not lam > 0:
            raise ValueError(f"lambda must be positive, got {lam!r}")
        self.lam = float(lam)
        self.t = float(t)

    @property
    def z(self) -> complex:
        return complex(self.lam, self.t)

    def conjugate(self) -> "GammaLineArgument":
        return GammaLineArgument(self.lam, -self.t)

    def __repr__(self) -> str:
        return f"GammaLineArgument(lam={self.lam!r}, t={self.t!r})"


def _as_complex(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(~(z.real > 0)):
        raise ValueError("argument must have positive real part")
    return z


def _shift(z: np.ndarray):
    """Return shift counts m (so that |z+m| >= 10) and their maximum."""
    m = np.where(np.abs(z) < _SHIFT_RADIUS,
                 np.ceil(_SHIFT_RADIUS - z.real), 0.0).astype(np.int64)
    m = np.maximum(m, 0)
    return m, int(m.max()) if m.size else 0


def _poly_inv(w: np.ndarray, coef: np.ndarray, first_power: int) -> np.ndarray:
    """sum_k coef[k] * w^-(first_power + 2k), Horner in 1/w^2."""
    inv = 1.0 / w
    inv2 = inv * inv
    acc = np.zeros_like(w)
    for c in coef[::-1]:
        acc = acc * inv2 + c
    return acc * inv ** first_power


def _scalar_out(arr: np.ndarray, scalar: bool):
    return arr[()] if scalar else arr


def log_gamma_complex(z):
    """Principal-branch ``log Gamma(z)`` for ``Re z > 0``.

    The branch is the one continuous on the right half-plane and real on the
    positive axis (not reduced modulo 2*pi).
    """
    scalar = np.ndim(z) == 0
    z = _as_complex(z)
    m, mmax = _shift(z)
    w = z + m
    corr = np.zeros_like(z)
    for k in range(mmax):
        active = k < m
        corr = corr + np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    res = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + _poly_inv(w, _LG_COEF, 1)
    return _scalar_out(res - corr, scalar)


def log_gamma(x):
    """Real ``log Gamma(x)`` for ``x > 0``."""
    return np.real(log_gamma_complex(x))


def _real_line_parts(lam, t):
    lam = np.asarray(lam, dtype=float)
    t = np.abs(np.asarray(t, dtype=float))
    if np.any(~(lam > 0)):
        raise ValueError("lambda must be positive")
    return np.broadcast_arrays(lam, t)


def log_abs_gamma_sq_scaled(lam, t):
    """``log|Gamma(lam + i t)|^2 + pi |t|``, free of cancellation for large |t|."""
    scalar = np.ndim(lam) == 0 and np.ndim(t) == 0
    lam, t = _real_line_parts(lam, t)
    z = lam + 1j * t
    m, mmax = _shift(z)
    re = lam + m
    corr = np.zeros_like(lam)
    for k in range(mmax):
        active = k < m
        corr = corr + np.where(active, 0.5 * np.log((lam + k) ** 2 + t * t), 0.0)
    w = re + 1j * t
    # Re logGamma(w) + pi t / 2  with arg(w) = pi/2 - atan(re/t)
    half = ((re - 0.5) * 0.5 * np.log(re * re + t * t) + t * np.arctan2(re, t)
            - re + _HALF_LOG_2PI + np.real(_poly_inv(w, _LG_COEF, 1)))
    return _scalar_out(2.0 * (half - corr), scalar)


def log_abs_gamma_sq(lam, t):
    """``log|Gamma(lam + i t)|^2``."""
    return log_abs_gamma_sq_scaled(lam, t) - np.pi * np.abs(t)


def abs_gamma_sq(arg: GammaLineArgument | float, t=None):
    """``|Gamma(lam + i t)|^2``; accepts a :class:`GammaLineArgument` or (lam, t)."""
    if isinstance(arg, GammaLineArgument):
        lam, t = arg.lam, arg.t
    else:
        lam = arg
        t = 0.0 if t is None else t
    return np.exp(log_abs_gamma_sq(lam, t))


def digamma(z):
    """``psi(z) = Gamma'(z)/Gamma(z)`` for ``Re z > 0``."""
    scalar = np.ndim(z) == 0
    z = _as_complex(z)
    m, mmax = _shift(z)
    w = z + m
    corr = np.zeros_like(z)
    for k in range(mmax):
        active = k < m
        corr = corr + np.where(active, 1.0 / np.where(active, z + k, 1.0), 0.0)
    res = np.log(w) - 0.5 / w - _poly_inv(w, _DG_COEF, 2)
    return _scalar_out(res - corr, scalar)


def digamma_imag_defect(lam, t):
    """``Im psi(lam + i|t|) - pi/2``, accurate when |t| is large."""
    scalar = np.ndim(lam) == 0 and np.ndim(t) == 0
    lam, t = _real_line_parts(lam, t)
    z = lam + 1j * t
    m, mmax = _shift(z)
    re = lam + m
    w = re + 1j * t
    corr = np.zeros_like(lam)
    for k in range(mmax):
        active = k < m
        # Im 1/(z+k) = -t / |z+k|^2
        corr = corr - np.where(active, t / ((lam + k) ** 2 + t * t), 0.0)
    res = -np.arctan2(re, t) + np.imag(-0.5 / w - _poly_inv(w, _DG_COEF, 2))
    return _scalar_out(res - corr, scalar)


def trigamma(z):
    """``psi'(z)`` for ``Re z > 0``."""
    scalar = np.ndim(z) == 0
    z = _as_complex(z)
    m, mmax = _shift(z)
    w = z + m
    corr = np.zeros_like(z)
    for k in range(mmax):
        active = k < m
        zk = np.where(active, z + k, 1.0)
        corr = corr + np.where(active, 1.0 / (zk * zk), 0.0)
    res = 1.0 / w + 0.5 / (w * w) + _poly_inv(w, _TG_COEF, 3)
    return _scalar_out(res + corr, scalar)


def pochhammer_log(z, n):
    """``log (z)_n = log Gamma(z+n) - log Gamma(z)`` for ``z > 0``, ``n >= 0``."""
    z = np.asarray(z, dtype=float)
    n = np.asarray(n)
    if np.any(n < 0):
        raise ValueError("n must be nonnegative")
    out = log_gamma(z + n) - log_gamma(z)
    return np.where(n == 0, 0.0, out)[()]
