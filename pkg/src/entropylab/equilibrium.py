"""Equilibrium measure of mass n in the external field Q.

With ``alpha = alpha_n`` the endpoint of the support (the MRS number) and
``x = cos(theta)``, the rescaled density is described through

    Phi_n'(theta) - 1 = alpha / (pi n) * PV int_0^pi
                        Q'(alpha cos phi) sin(phi)^2 / (cos phi - cos theta) dphi,

so that ``Phi_n'(theta) = pi sigma*_n(cos theta) sin(theta)``.  Because the
principal value of ``int_0^pi dphi / (cos phi - cos theta)`` is zero, the
kernel can be replaced by the divided difference of ``h(u) = Q'(alpha u)(1-u^2)``,
which is smooth; that form drives the cached profile.  The single-point
routine :func:`density_sigma_star` keeps the explicit principal value and
serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .entropy import DEFAULT_CONFIG, QuadratureNotConverged, cached_coefficients, cached_zeros
from .orthopoly import PollaczekParams, evaluate_pn
from .quadrature import (AdaptiveConfig, adaptive_integrate, composite_rule,
                         graded_breakpoints, pv_integrate)
from .weight import Q, Q_double_prime, Q_prime, log_weight

__all__ = [
    "MrsSolution",
    "EquilibriumProfile",
    "CosineApproxReport",
    "DegenerateFieldError",
    "mrs_number",
    "mrs_closed_form",
    "mrs_moment",
    "density_sigma_star",
    "phi_prime_minus_one",
    "equilibrium_profile",
    "phi_n",
    "phi_inverse",
    "levin_integral",
    "truncated_log_moment",
    "cosine_approx_l1",
]

_LOG2 = math.log(2.0)


class DegenerateFieldError(ValueError):
    """The field has no MRS number (a = 0 and lam <= 1/2)."""


def _check_field(params: PollaczekParams):
    if params.a == 0 and params.lam <= 0.5:
        raise DegenerateFieldError(
            f"field is not confining for lam={params.lam}, a=0; no MRS number exists")


# Internally the MRS number is carried as its gap ``1 - alpha``, which can be
# far smaller than the spacing of doubles near 1 (a = 0, lam near 1/2).

def _peak_levels(gap: float, span: float) -> int:
    """Geometric refinement depth that resolves the endpoint layer of width ~ sqrt(1 - alpha^2)."""
    width = math.sqrt(max(gap * (2 - gap), 1e-300))
    return int(min(max(math.ceil(math.log2(span / (0.05 * width))), 6), 48))


def _field_at(gap: float, c: np.ndarray, s: np.ndarray, params, second=False):
    """Q'(alpha c) (and optionally Q'') with ``1 - (alpha c)^2`` from ``s = sqrt(1 - c^2)``."""
    alpha = 1.0 - gap
    one_m = gap * (2 - gap) + alpha * alpha * s * s
    x = alpha * c
    if second:
        return Q_prime(x, params, one_m), Q_double_prime(x, params, one_m)
    return Q_prime(x, params, one_m)


def mrs_moment(alpha: float, params: PollaczekParams,
               cfg: AdaptiveConfig | None = None, gap: float | None = None) -> float:
    """``(2/pi) int_0^1 alpha x Q'(alpha x) / sqrt(1 - x^2) dx``, the mass supported by ``[-alpha, alpha]``.

    Pass ``gap = 1 - alpha`` instead of ``alpha`` when it is known more
    accurately than ``alpha`` itself.
    """
    if gap is None:
        gap = 1.0 - alpha
    alpha = 1.0 - gap
    cfg = cfg or AdaptiveConfig(abs_tol=1e-13, rel_tol=1e-14)
    half = 0.5 * np.pi
    k = np.arange(1, _peak_levels(gap, half) + 1)
    cfg = cfg.with_splits(half - half * 2.0 ** -k)

    def f(phi):
        # x = sin(phi); 1 - x^2 = cos(phi)^2
        x = np.sin(phi)
        return alpha * x * _field_at(gap, x, np.cos(phi), params)

    res = adaptive_integrate(f, (0.0, half), cfg)
    return 2.0 / math.pi * res.value


@dataclass(frozen=True)
class MrsSolution:
    n: int
    alpha_n: float
    residual: float
    iterations: int
    gap: float = math.nan


def mrs_closed_form(n: int, lam: float) -> float:
    """MRS number of the a = 0 field, ``sqrt(1 - ((lam - 1/2) / (n + lam - 1/2))^2)``."""
    r = (lam - 0.5) / (n + lam - 0.5)
    return math.sqrt((1 - r) * (1 + r))


@lru_cache(maxsize=256)
def _mrs_cached(n: int, params: PollaczekParams) -> MrsSolution:
    a = params.a

    def g(gap):
        return mrs_moment(None, params, gap=gap) - n

    # bracket in alpha from the large-n localisation 1 - alpha ~ a/n
    lo = min(max(1 - 2 * a / n - 0.5, 0.01), 1 - 1e-12)
    hi = min(max(1 - a / (2 * n), 0.01), 1 - 1e-12)
    if a == 0:
        # the gap is O(1/n^2) here; starting next to 1 - 1e-12 makes every
        # Brent step pay for a needlessly deep endpoint layer
        hi = 1 - 0.01 / (n + 1) ** 2
    if hi <= lo:
        lo = 0.01
    gap_hi, gap_lo = 1 - lo, 1 - hi
    for _ in range(60):
        if g(gap_hi) < 0:
            break
        gap_hi = 0.5 * (1 + gap_hi)
    else:
        raise RuntimeError(f"could not bracket the MRS number below for n={n}")
    for _ in range(60):
        if g(gap_lo) > 0:
            break
        gap_lo /= 16
        if gap_lo < 1e-300:
            raise RuntimeError(f"could not bracket the MRS number above for n={n}")
    gap, info = brentq(g, gap_lo, gap_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                       maxiter=200, full_output=True)
    return MrsSolution(n=n, alpha_n=float(1 - gap), residual=float(g(gap)),
                       iterations=int(info.iterations), gap=float(gap))


def mrs_number(n: int, params: PollaczekParams, cfg=None) -> MrsSolution:
    """Solve ``mrs_moment(alpha) = n`` by bracketed Brent iteration."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_field(params)
    return _mrs_cached(int(n), params)


def _h_parts(gap, c, s, params):
    """h(u) = Q'(alpha u)(1 - u^2) and h'(u) at u = c with s = sqrt(1 - c^2)."""
    qp, qpp = _field_at(gap, c, s, params, second=True)
    h = qp * s * s
    dh = (1.0 - gap) * qpp * s * s - 2 * c * qp
    return h, dh


def _cos_difference(phi, theta):
    """``cos(phi) - cos(theta)`` in product form, accurate for nearby angles."""
    return -2.0 * np.sin(0.5 * (phi + theta)) * np.sin(0.5 * (phi - theta))


def _phi_rule(gap: float, extra_levels: int = 0):
    half = 0.5 * np.pi
    levels = _peak_levels(gap, half) + extra_levels
    bp = graded_breakpoints(np.array([0.0, half, np.pi]), levels=levels, interior=4)
    return composite_rule(bp)


def phi_prime_minus_one(theta, n: int, params: PollaczekParams, gap: float | None = None,
                        extra_levels: int = 0, chunk: int = 256) -> np.ndarray:
    """``Phi_n'(theta) - 1`` on an array of angles (divided-difference form).

    ``gap`` is ``1 - alpha_n``; it is solved for when omitted.
    """
    _check_field(params)
    if gap is None:
        gap = mrs_number(n, params).gap
    alpha = 1.0 - gap
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rule = _phi_rule(gap, extra_levels)
    cphi, sphi = np.cos(rule.nodes), np.sin(rule.nodes)
    hphi, _ = _h_parts(gap, cphi, sphi, params)
    # below this separation the divided difference is replaced by h' at the
    # midpoint; h varies on the scale 1 - alpha^2, so the cutoff follows it
    cutoff = 1e-5 * min(gap * (2 - gap), 1.0)
    half_phi = 0.5 * rule.nodes
    out = np.empty_like(theta)
    for i in range(0, theta.size, chunk):
        th = theta[i:i + chunk]
        ct = np.cos(th)
        ht, _ = _h_parts(gap, ct, np.sin(th), params)
        du = _cos_difference(rule.nodes[None, :], th[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (hphi[None, :] - ht[:, None]) / du
        near = np.nonzero(np.abs(du) < cutoff)
        if near[0].size:
            a1, a2 = 0.5 * th[near[0]], half_phi[near[1]]
            # 1 -+ u at the midpoint, from half-angle forms without cancellation
            om = np.sin(a1) ** 2 + np.sin(a2) ** 2
            op = np.cos(a1) ** 2 + np.cos(a2) ** 2
            _, dmid = _h_parts(gap, 0.5 * (op - om), np.sqrt(om * op), params)
            q[near] = dmid
        out[i:i + chunk] = q @ rule.weights
    return alpha / (math.pi * n) * out


def density_sigma_star(theta, n: int, params: PollaczekParams,
                       cfg: AdaptiveConfig | None = None) -> float:
    """``sigma*_n(cos theta)`` from the principal-value formula at one angle.

    The PV is taken in the angle variable: the numerator
    ``h(cos phi) (phi - theta) / (cos phi - cos theta)`` is smooth and the
    remaining ``1 / (phi - theta)`` singularity is handled by subtraction.
    """
    theta = float(theta)
    if not 0 < theta < math.pi:
        raise ValueError("theta must lie in (0, pi)")
    _check_field(params)
    sol = mrs_number(n, params)
    alpha, gap = sol.alpha_n, sol.gap
    st = math.sin(theta)
    half = 0.5 * np.pi
    k = np.arange(1, _peak_levels(gap, half) + 1)
    g = half * 2.0 ** -k
    cfg = (cfg or AdaptiveConfig(abs_tol=1e-12, rel_tol=1e-12)).with_splits(
        np.concatenate([g, np.pi - g, [half]]))

    def f(phi):
        c, s = np.cos(phi), np.sin(phi)
        h, _ = _h_parts(gap, c, s, params)
        d = _cos_difference(phi, theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(phi == theta, -1.0 / st, (phi - theta) / d)
        return h * ratio

    res = pv_integrate(f, theta, (0.0, math.pi), cfg)
    phi_prime = 1.0 + alpha / (math.pi * n) * res.value
    return phi_prime / (math.pi * st)


def _chebyshev_angles(size: int) -> np.ndarray:
    k = np.arange(size)
    th = 0.5 * math.pi * (1 - np.cos(math.pi * k / (size - 1)))
    th[0], th[-1] = 0.0, math.pi
    return th


_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)


@dataclass
class EquilibriumProfile:
    """Sampled ``Phi_n`` on a Chebyshev-spaced angle grid."""

    n: int
    alpha_n: float
    theta_grid: np.ndarray
    sigma_star: np.ndarray
    phi: np.ndarray
    phi_l1_defect: float
    phi_prime: np.ndarray = field(repr=False, default=None)
    _spline: PchipInterpolator = field(repr=False, default=None)

    @property
    def normalization_defect(self) -> float:
        return float(self.phi[-1] - math.pi)

    def phi_at(self, theta):
        return self._spline(np.asarray(theta, dtype=float))[()]

    def phi_prime_at(self, theta):
        return self._spline.derivative()(np.asarray(theta, dtype=float))[()]

    def phi_inverse(self, eta, iterations: int = 60):
        """Monotone bisection of ``Phi_n(theta) = eta`` inside the bracketing grid cell."""
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        if np.any((eta < 0) | (eta > math.pi)):
            raise ValueError("eta must lie in [0, pi]")
        j = np.clip(np.searchsorted(self.phi, eta) - 1, 0, len(self.phi) - 2)
        lo = self.theta_grid[j].copy()
        hi = self.theta_grid[j + 1].copy()
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            below = self._spline(mid) < eta
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return (0.5 * (lo + hi))[()] if eta.size > 1 else float(0.5 * (lo[0] + hi[0]))


@lru_cache(maxsize=32)
def equilibrium_profile(n: int, params: PollaczekParams, grid_size: int = 2048) -> EquilibriumProfile:
    """Build ``Phi_n`` by integrating ``Phi_n'`` with 4-point Gauss rules between grid angles."""
    if grid_size < 16:
        raise ValueError("grid_size must be >= 16")
    sol = mrs_number(n, params)
    alpha, gap = sol.alpha_n, sol.gap
    th = _chebyshev_angles(grid_size)
    lo, hi = th[:-1], th[1:]
    nodes = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * _GL4_X[None, :]
    wts = 0.5 * (hi - lo)[:, None] * _GL4_W[None, :]
    # the profile is symmetric about pi/2; compute the left half only
    m = grid_size // 2
    left_nodes = nodes[:m]
    d_nodes = phi_prime_minus_one(left_nodes.ravel(), n, params, gap).reshape(left_nodes.shape)
    d_nodes = np.concatenate([d_nodes, d_nodes[: grid_size - 1 - m][::-1, ::-1]])
    d_grid_left = phi_prime_minus_one(th[: grid_size - m], n, params, gap)
    d_grid = np.concatenate([d_grid_left, d_grid_left[: m][::-1]])
    # At the MRS number Phi'(0) = 1 + d(0) vanishes exactly.  Writing
    # Phi' = d(theta) - d(0) on the same rule cancels the quadrature error
    # near the endpoints, where Phi' ~ theta^2 is far below it.
    d0 = d_grid[0]
    pp_nodes = d_nodes - d0
    increments = np.sum(wts * pp_nodes, axis=1)
    phi = np.concatenate([[0.0], np.cumsum(increments)])
    l1 = float(np.sum(wts * np.abs(pp_nodes - 1.0)))
    phi_prime = d_grid - d0
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma = phi_prime / (math.pi * np.sin(th))
    spline = PchipInterpolator(th, phi)
    return EquilibriumProfile(n=n, alpha_n=alpha, theta_grid=th, sigma_star=sigma,
                              phi=phi, phi_l1_defect=l1, phi_prime=phi_prime,
                              _spline=spline)


def phi_n(theta, n: int, params: PollaczekParams, cfg=None):
    return equilibrium_profile(n, params).phi_at(theta)


def phi_inverse(eta, n: int, params: PollaczekParams, cfg=None):
    return equilibrium_profile(n, params).phi_inverse(eta)


def levin_integral(n: int, params: PollaczekParams, cfg: AdaptiveConfig | None = None) -> float:
    """``I_n = -(2/pi) int_{-alpha}^{alpha} Q(x) / sqrt(alpha^2 - x^2) dx``."""
    sol = mrs_number(n, params)
    alpha = sol.alpha_n
    half = 0.5 * np.pi
    k = np.arange(1, _peak_levels(sol.gap, half) + 1)
    cfg = (cfg or DEFAULT_CONFIG).with_splits(half * 2.0 ** -k)
    res = adaptive_integrate(lambda th: Q(alpha * np.cos(th), params), (0.0, half), cfg)
    return -4.0 / math.pi * res.value


def _zero_angles_scaled(n: int, params: PollaczekParams, alpha: float) -> np.ndarray:
    z = np.asarray(cached_zeros(n, params))
    r = z[(z > 0) & (z < alpha)] / alpha
    return np.arccos(r)


def truncated_log_moment(n: int, params: PollaczekParams,
                         cfg: AdaptiveConfig | None = None) -> float:
    """``int_{-alpha}^{alpha} log sqrt(alpha^2 - x^2) p_n^2 w dx``; tends to ``-log 2``."""
    alpha = mrs_number(n, params).alpha_n
    cfg = (cfg or DEFAULT_CONFIG).with_splits(_zero_angles_scaled(n, params, alpha))
    coeffs = cached_coefficients(params)

    def f(phi):
        x = alpha * np.cos(phi)
        st = evaluate_pn(x, n, coeffs)
        with np.errstate(divide="ignore"):
            lp2 = 2 * np.log(np.abs(st.p)) + 2 * _LOG2 * st.exponent
        s = np.sin(phi)
        dens = np.exp(lp2 + log_weight(x, params)) * alpha * s
        return np.where(dens == 0.0, 0.0, np.log(alpha * s) * dens)

    res = adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg)
    if not res.converged:
        raise QuadratureNotConverged(f"truncated log moment for n={n} did not converge")
    return 2.0 * res.value


@dataclass(frozen=True)
class CosineApproxReport:
    n: int
    l1_distance: float
    f_norm_sq: float = math.nan


def cosine_approx_l1(n: int, params: PollaczekParams,
                     cfg: AdaptiveConfig | None = None) -> CosineApproxReport:
    """``int_0^pi |f_n - g_n| dtheta`` between the scaled polynomial and its cosine model.

    ``f_n = sqrt(alpha) p_n(alpha cos t) sqrt(w(alpha cos t) sin t)`` and
    ``g_n = sqrt(2/pi) cos(t/2 - pi/4 + n Phi_n(t))``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    prof = equilibrium_profile(n, params)
    alpha = prof.alpha_n
    coeffs = cached_coefficients(params)
    amp = math.sqrt(2.0 / math.pi)
    cfg = (cfg or AdaptiveConfig(abs_tol=1e-9, rel_tol=1e-9)).with_splits(
        _zero_angles_scaled(n, params, alpha))

    def f(theta):
        x = alpha * np.cos(theta)
        st = evaluate_pn(x, n, coeffs)
        with np.errstate(divide="ignore"):
            lp = np.log(np.abs(st.p)) + _LOG2 * st.exponent
            logf = lp + 0.5 * (log_weight(x, params) + math.log(alpha) + np.log(np.sin(theta)))
        fn = np.sign(st.p) * np.exp(logf)
        gn = amp * np.cos(0.5 * theta - 0.25 * math.pi + n * prof.phi_at(theta))
        return np.stack([np.abs(fn - gn), fn * fn])

    # |f - g| and f^2 are both symmetric about pi/2
    res = adaptive_integrate(f, (0.0, 0.5 * np.pi), cfg)
    if not res.converged:
        raise QuadratureNotConverged(f"cosine model distance for n={n} did not converge")
    l1, norm = 2.0 * np.asarray(res.value)
    return CosineApproxReport(n=n, l1_distance=float(l1), f_norm_sq=float(norm))
