"""Entropy functionals of orthonormal Pollaczek polynomials.

For the probability density ``p_n^2 w`` on [-1, 1]:

    E_n = -int log(p_n^2) p_n^2 w,   G_n = int log(w) p_n^2 w,   F_n = E_n - G_n.

E_n is computed twice.  The direct route integrates ``-log(p_n^2) p_n^2 w`` in
the angle ``x = cos(theta)`` with panel breaks at the zeros.  The potential
route factors ``p_n = gamma_n prod (x - zeta_j)`` and writes

    E_n = -2 log gamma_n + 2 sum_j V(zeta_j),   V(z) = -int log|z - t| p_n^2 w dt,

which only shares the density ``p_n^2 w`` with the direct route; the
logarithm is built from the eigenvalue zeros and the closed-form gamma_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .orthopoly import (PollaczekParams, RecurrenceCoefficients, evaluate_pn,
                        log_leading_gamma, log_leading_gamma_reduced, zeros)
from .quadrature import (AdaptiveConfig, AdaptiveResult, adaptive_integrate,
                         integrate_log_singular)
from .specfun import digamma, log_abs_gamma_sq, log_gamma
from .weight import log_weight_theta, s_prime_scaled_theta, s_value_theta

__all__ = [
    "EntropyReport",
    "PotentialSample",
    "DEFAULT_CONFIG",
    "cached_coefficients",
    "cached_zeros",
    "density_components",
    "compute_G",
    "compute_E_direct",
    "compute_E_potential",
    "compute_report",
    "nu_potential",
    "mutual_energy",
    "energy_scaled",
    "tau",
    "predicted_G",
    "gamma_shape_integral",
    "gamma_shape_closed_form",
    "constants_B",
    "s_prime_moment",
    "s_field_average",
    "QuadratureNotConverged",
    "LOG_PI_MINUS_ONE",
]

LOG_PI_MINUS_ONE = math.log(math.pi) - 1.0
_LOG2 = math.log(2.0)

DEFAULT_CONFIG = AdaptiveConfig(abs_tol=1e-11, rel_tol=1e-11)


class QuadratureNotConverged(RuntimeError):
    pass


@lru_cache(maxsize=32)
def cached_coefficients(params: PollaczekParams) -> RecurrenceCoefficients:
    return RecurrenceCoefficients(params, size=1024)


@lru_cache(maxsize=128)
def cached_zeros(n: int, params: PollaczekParams) -> np.ndarray:
    z = zeros(n, cached_coefficients(params))
    z.flags.writeable = False
    return z


def _zero_angles(n: int, params: PollaczekParams) -> tuple:
    """Angles ``arccos(zeta_j)`` of the nonnegative zeros, inside (0, pi/2)."""
    if n < 1:
        return ()
    z = cached_zeros(n, params)
    th = np.arccos(z[z > 0])
    return tuple(th[(th > 0) & (th < 0.5 * np.pi)])


def _log_p2(x, n: int, params: PollaczekParams) -> np.ndarray:
    st = evaluate_pn(x, n, cached_coefficients(params))
    with np.errstate(divide="ignore"):
        return 2.0 * np.log(np.abs(st.p)) + 2.0 * _LOG2 * st.exponent


def _density_terms(theta, n, params):
    """(log p_n^2, log w, p_n^2 w sin(theta)) at the angles ``theta``."""
    lp2 = _log_p2(np.cos(theta), n, params)
    lw = log_weight_theta(theta, params)
    dens = np.exp(lp2 + lw) * np.sin(theta)
    return lp2, lw, dens


@dataclass
class PotentialSample:
    z: float
    V: float


@dataclass
class EntropyReport:
    n: int
    params: PollaczekParams
    E: float
    F: float
    G: float
    E_alt: float
    method_error: float
    quadrature_error: float
    predicted_E: float
    predicted_G: float
    F_limit_residual: float
    converged: bool = True

    @property
    def E_residual(self) -> float:
        return self.E - self.predicted_E

    @property
    def G_residual(self) -> float:
        return self.G - self.predicted_G


def density_components(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None):
    """Integrate mass, E and G of ``p_n^2 w`` in one adaptive pass.

    Returns ``(mass, E, G, error, converged)``.  Only [0, pi/2] is visited;
    the density is even.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    cfg = (cfg or DEFAULT_CONFIG).with_splits(_zero_angles(n, params))

    def f(theta):
        lp2, lw, dens = _density_terms(theta, n, params)
        with np.errstate(invalid="ignore"):
            e = -lp2 * dens
            g = lw * dens
        # y^2 log y^2 -> 0 at zeros of p_n and where w underflows
        e = np.where(dens == 0.0, 0.0, e)
        g = np.where(dens == 0.0, 0.0, g)
        return np.stack([dens, e, g])

    res = adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg)
    mass, e, g = 2.0 * np.asarray(res.value)
    return float(mass), float(e), float(g), 2.0 * res.error, res.converged


def compute_G(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``G_n = int log(w) p_n^2 w``."""
    _, _, g, _, ok = density_components(n, params, cfg)
    if not ok:
        raise QuadratureNotConverged(f"G_{n} quadrature did not converge")
    return g


def compute_E_direct(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``E_n = -int log(p_n^2) p_n^2 w`` by direct quadrature."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _, e, _, _, ok = density_components(n, params, cfg)
    if not ok:
        raise QuadratureNotConverged(f"E_{n} quadrature did not converge")
    return e


def _zero_log_sum(t: np.ndarray, z: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """``sum_j log|t - z_j|`` for every t, in bounded-memory chunks."""
    out = np.empty_like(t)
    for i in range(0, t.size, chunk):
        tt = t[i:i + chunk]
        with np.errstate(divide="ignore"):
            out[i:i + chunk] = np.log(np.abs(tt[:, None] - z[None, :])).sum(axis=1)
    return out


def compute_E_potential(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """E_n from the leading coefficient and the potential of ``p_n^2 w`` at the zeros.

    The sum over zeros is taken inside the integral, so a single quadrature
    of ``-sum_j log|zeta_j - t|`` against ``p_n^2 w`` replaces n potentials.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = np.asarray(cached_zeros(n, params))
    cfg = (cfg or DEFAULT_CONFIG).with_splits(_zero_angles(n, params))

    def f(theta):
        _, _, dens = _density_terms(theta, n, params)
        v = -_zero_log_sum(np.cos(theta), z) * dens
        return np.where(dens == 0.0, 0.0, v)

    res = adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg)
    if not res.converged:
        raise QuadratureNotConverged(f"potential sum for n={n} did not converge")
    return -2.0 * log_leading_gamma(n, params) + 2.0 * (2.0 * res.value)


def nu_potential(z: float, n: int, params: PollaczekParams,
                 cfg: AdaptiveConfig | None = None) -> PotentialSample:
    """``V(z) = -int log|z - t| p_n^2(t) w(t) dt`` for z in [-1, 1]."""
    z = float(z)
    if not -1.0 <= z <= 1.0:
        raise ValueError("z must lie in [-1, 1]")
    splits = list(_zero_angles(n, params))
    splits += [np.pi - s for s in splits] + [0.5 * np.pi]
    cfg = (cfg or DEFAULT_CONFIG).with_splits(splits)

    c = math.acos(z)

    def f(theta, offset):
        _, _, dens = _density_terms(theta, n, params)
        # cos c - cos theta as a product, exact in the offset theta - c
        diff = 2.0 * np.sin(0.5 * (theta + c)) * np.sin(0.5 * offset)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -np.log(np.abs(diff)) * dens
        return np.where(dens == 0.0, 0.0, v)

    res = integrate_log_singular(f, c, (0.0, np.pi), cfg)
    if not res.converged:
        raise QuadratureNotConverged(f"potential at z={z} did not converge")
    return PotentialSample(z=z, V=float(res.value))


def mutual_energy(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None,
                  E: float | None = None) -> float:
    """``I[rho_n, nu_n] = (E_n + 2 log gamma_n) / (2n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if E is None:
        E = compute_E_direct(n, params, cfg)
    return (E + 2.0 * log_leading_gamma(n, params)) / (2 * n)


def energy_scaled(n: int, E: float, params: PollaczekParams) -> float:
    """``2n (I[rho_n, nu_n] - log 2)``, assembled without cancellation."""
    return E + 2.0 * log_leading_gamma_reduced(n, params)


def tau(params: PollaczekParams) -> float:
    """Constant term of the large-n expansion of E_n."""
    lam, a = params.lam, params.a
    return float(2 * a - 1 + log_gamma(lam + a) + log_gamma(lam + a + 1) - log_gamma(2 * lam))


def predicted_G(n: int, params: PollaczekParams) -> float:
    """Two-term large-n expansion of G_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lam, a = params.lam, params.a
    return float(-2 * a * math.log(n) + 2 * a + log_gamma(lam + a) + log_gamma(lam + a + 1)
                 - math.log(math.pi) - log_gamma(2 * lam))


def _predicted_E(n: int, params: PollaczekParams) -> float:
    return -2 * params.a * math.log(n) + tau(params)


def compute_report(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None,
                   cross_check: bool = True) -> EntropyReport:
    """All entropies of degree n; ``E_alt`` is NaN when ``cross_check`` is off."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _, e, g, err, ok = density_components(n, params, cfg)
    e_alt = math.nan
    if cross_check:
        try:
            e_alt = compute_E_potential(n, params, cfg)
        except QuadratureNotConverged:
            ok = False
    f = e - g
    return EntropyReport(
        n=n, params=params, E=e, F=f, G=g, E_alt=e_alt,
        method_error=abs(e - e_alt), quadrature_error=err,
        predicted_E=_predicted_E(n, params), predicted_G=predicted_G(n, params),
        F_limit_residual=f - LOG_PI_MINUS_ONE, converged=ok)


def gamma_shape_closed_form(params: PollaczekParams) -> float:
    """``2 log Gamma(lam + a) - 2 a psi(lam + a)``.

    The sign matters: at a = 0 the integral reduces to ``2 log Gamma(lam)``,
    and the reversed-sign expression would give its negative.
    """
    lam, a = params.lam, params.a
    return float(2 * log_gamma(lam + a) - 2 * a * np.real(digamma(lam + a)))


def gamma_shape_integral(params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``J = (4/pi) int_0^1 log|Gamma(lam + i a x / sqrt(1-x^2))|^2 sqrt(1-x^2) dx``.

    Evaluated with ``x = cos(theta)``, where the integrand is
    ``log|Gamma(lam + i a cot(theta))|^2 sin(theta)^2`` and tends to 0 at theta = 0.
    """
    lam, a = params.lam, params.a
    cfg = cfg or DEFAULT_CONFIG

    def f(theta):
        st = np.sin(theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = a * np.cos(theta) / st
            v = log_abs_gamma_sq(lam, t) * st * st
        return np.where(st == 0.0, 0.0, v)

    res = adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg)
    if not res.converged:
        raise QuadratureNotConverged("gamma-shape integral did not converge")
    return 4.0 / math.pi * res.value


def _quarter_arc_integral(g, cfg: AdaptiveConfig) -> AdaptiveResult:
    # when a = 0, s ~ (lam - 1/2) log(1 - x^2) is log-singular at theta = 0
    return integrate_log_singular(lambda th, _: g(th), 0.0, (0.0, 0.5 * np.pi), cfg)


def constants_B(params: PollaczekParams, cfg: AdaptiveConfig | None = None):
    """``(B1, B2, B3)`` of the G_n constant chain.

    B1 = (2/pi) int_0^{pi/2} s(cos t) dt is the arcsine average of ``s``;
    B2 = (1/pi) int_0^{pi/2} cos(t) [(1-x^2) s'(x)]_{x=cos t} dt;
    B3 = -a - lam + 2 a psi(a + lam).
    """
    lam, a = params.lam, params.a
    cfg = cfg or DEFAULT_CONFIG
    b1 = _quarter_arc_integral(lambda th: s_value_theta(th, params), cfg)
    b2 = adaptive_integrate(lambda th: np.cos(th) * s_prime_scaled_theta(th, params),
                            (0.0, 0.5 * np.pi), cfg)
    if not (b1.converged and b2.converged):
        raise QuadratureNotConverged("B-constant quadrature did not converge")
    b3 = float(-a - lam + 2 * a * np.real(digamma(a + lam)))
    return 2.0 / math.pi * b1.value, b2.value / math.pi, b3


def s_field_average(params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``(4/pi) int_0^1 s(x) sqrt(1-x^2) dx``; equals B1 - 2 B2 by parts."""
    res = _quarter_arc_integral(lambda th: s_value_theta(th, params) * np.sin(th) ** 2,
                                cfg or DEFAULT_CONFIG)
    return 4.0 / math.pi * res.value


def s_prime_moment(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``int_0^1 x (1-x^2) s'(x) p_n^2 w dx``, which tends to B2."""
    cfg = (cfg or DEFAULT_CONFIG).with_splits(_zero_angles(n, params))

    def f(theta):
        _, _, dens = _density_terms(theta, n, params)
        return np.cos(theta) * s_prime_scaled_theta(theta, params) * dens

    return float(adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg).value)
