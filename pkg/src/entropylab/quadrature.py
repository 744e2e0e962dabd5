"""Gauss rules, adaptive composite Gauss-Legendre, principal values.

The adaptive integrator is vectorized: every refinement round evaluates the
integrand once on the nodes of all still-active panels, so integrands that
are expensive per call (a degree-n recurrence) pay the Python overhead only
once per round.  Panel sums are combined with :func:`math.fsum`, which makes
the result independent of summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .orthopoly import RecurrenceCoefficients, evaluate_pn, zeros

__all__ = [
    "QuadratureRule",
    "AdaptiveConfig",
    "AdaptiveResult",
    "gauss_legendre_rule",
    "gauss_w_rule",
    "adaptive_integrate",
    "pv_integrate",
    "integrate_log_singular",
    "composite_rule",
    "graded_breakpoints",
    "derivative_moment",
]

PANEL_ORDER = 15
_GL_X, _GL_W = np.polynomial.legendre.leggauss(PANEL_ORDER)
_ROUNDOFF = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return math.fsum(self.weights * f(self.nodes))


@dataclass(frozen=True)
class AdaptiveConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_depth: int = 40
    forced_splits: tuple = ()
    max_panels: int = 50_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not 1 <= self.max_depth <= 60:
            raise ValueError("max_depth must lie in [1, 60]")

    def with_splits(self, splits) -> "AdaptiveConfig":
        return replace(self, forced_splits=tuple(
            float(s) for s in np.sort(np.asarray(splits, float).ravel())))


@dataclass
class AdaptiveResult:
    value: np.ndarray | float
    error: float
    converged: bool = True
    panels: int = 0
    evaluations: int = 0
    extra: dict = field(default_factory=dict)

    def __iter__(self):
        # allows ``value, err = adaptive_integrate(...)``
        yield self.value
        yield self.error


def gauss_legendre_rule(N: int) -> QuadratureRule:
    if N < 1:
        raise ValueError("N must be >= 1")
    x, w = np.polynomial.legendre.leggauss(N)
    return QuadratureRule("gauss_legendre", x, w)


def gauss_w_rule(N: int, coeffs: RecurrenceCoefficients) -> QuadratureRule:
    """Gauss rule for the (unit-mass) orthogonality weight of ``coeffs``.

    Nodes are the zeros of p_N; weights are Christoffel numbers
    ``1 / sum_{k<N} p_k(x_j)^2``, evaluated in the scaled frame.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    x = zeros(N, coeffs)
    st = evaluate_pn(x, N, coeffs, sumsq=True)
    w = np.ldexp(1.0 / st.sumsq, -2 * st.exponent)
    return QuadratureRule("gauss_w", x, w)


def _panel_nodes(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid[:, None] + half[:, None] * _GL_X[None, :]


def _panel_sums(vals: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # vals: (..., P, K) -> (..., P)
    return 0.5 * (hi - lo) * np.tensordot(vals, _GL_W, axes=([-1], [0]))


def _evaluate(f, nodes: np.ndarray) -> np.ndarray:
    flat = nodes.ravel()
    out = np.asarray(f(flat), dtype=float)
    return out.reshape(out.shape[:-1] + nodes.shape)


def adaptive_integrate(f: Callable[[np.ndarray], np.ndarray], interval: Sequence[float],
                       cfg: AdaptiveConfig | None = None) -> AdaptiveResult:
    """Integrate ``f`` over ``interval`` by bisecting 15-point Gauss panels.

    ``f`` takes a 1-d array of abscissae and returns an array whose last axis
    matches it; leading axes are treated as independent components sharing
    the panel refinement (the worst component drives it).  Panels are forced
    to break at ``cfg.forced_splits``.  A panel is accepted once its two
    halves agree with the parent to within its length-proportional share of
    ``max(abs_tol, rel_tol * |estimate|)``.
    """
    cfg = cfg or AdaptiveConfig()
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        if b == a:
            return AdaptiveResult(0.0, 0.0)
        raise ValueError("interval must be increasing")
    pts = [a] + [s for s in cfg.forced_splits if a < s < b] + [b]
    edges = np.unique(np.asarray(pts, dtype=float))
    lo, hi = edges[:-1], edges[1:]
    length = b - a

    nodes = _panel_nodes(lo, hi)
    est = _panel_sums(_evaluate(f, nodes), lo, hi)
    comp_shape = est.shape[:-1]
    n_eval = nodes.size
    depth = 0

    accepted = np.zeros(comp_shape)
    acc_vals: list[np.ndarray] = []
    acc_err = []
    converged = True
    n_panels = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        clo = np.concatenate([lo, mid])
        chi = np.concatenate([mid, hi])
        cnodes = _panel_nodes(clo, chi)
        cvals = _evaluate(f, cnodes)
        cest = _panel_sums(cvals, clo, chi)
        cabs = _panel_sums(np.abs(cvals), clo, chi)
        n_eval += cnodes.size
        P = lo.size
        refined = cest[..., :P] + cest[..., P:]
        diff = np.abs(refined - est)
        # differences at roundoff level cannot be reduced by bisection
        floor = _ROUNDOFF * (cabs[..., :P] + cabs[..., P:])
        diff = np.where(diff <= floor, 0.0, diff)
        err = diff.reshape(-1, P).max(axis=0) if comp_shape else diff
        total = np.sum(refined, axis=-1) + accepted
        budget = max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(total))))
        local = budget * (hi - lo) / length
        bad = ~np.isfinite(err)
        if np.any(bad):
            converged = False
        ok = (err <= local) | bad
        # panels too narrow to bisect in floating point
        ok |= (hi - lo) <= 8 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        depth += 1
        if depth >= cfg.max_depth or 2 * np.count_nonzero(~ok) > cfg.max_panels:
            if not np.all(ok):
                converged = False
            ok[:] = True
        if np.any(ok):
            accepted = accepted + np.sum(refined[..., ok], axis=-1)
            acc_vals.append(refined[..., ok])
            acc_err.append(err[ok])
            n_panels += int(ok.sum())
        keep = ~ok
        if not np.any(keep):
            break
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        est = np.concatenate([cest[..., :P][..., keep], cest[..., P:][..., keep]], axis=-1)

    vals = np.concatenate(acc_vals, axis=-1)
    if comp_shape:
        flat = vals.reshape(-1, vals.shape[-1])
        value = np.array([math.fsum(row) for row in flat]).reshape(comp_shape)
    else:
        value = math.fsum(vals)
    error = math.fsum(np.concatenate(acc_err)) if acc_err else 0.0
    if not np.all(np.isfinite(value)):
        converged = False
    return AdaptiveResult(value, error, converged, n_panels, n_eval)


def pv_integrate(f: Callable[[np.ndarray], np.ndarray], c: float, interval: Sequence[float],
                 cfg: AdaptiveConfig | None = None) -> AdaptiveResult:
    """Cauchy principal value of ``int f(u) / (u - c) du`` over ``interval``.

    ``f`` is the smooth numerator.  The singularity is subtracted:
    ``int (f(u) - f(c)) / (u - c) du + f(c) log((b - c) / (c - a))``.
    """
    cfg = cfg or AdaptiveConfig()
    a, b = float(interval[0]), float(interval[1])
    c = float(c)
    if not a < c < b:
        raise ValueError("singular point must lie strictly inside the interval")
    fc = float(np.asarray(f(np.array([c])), dtype=float)[0])

    def g(u):
        d = u - c
        with np.errstate(invalid="ignore", divide="ignore"):
            q = (np.asarray(f(u), dtype=float) - fc) / d
        return np.where(d == 0, 0.0, q)

    res = adaptive_integrate(g, (a, b), cfg.with_splits(tuple(cfg.forced_splits) + (c,)))
    res.value = res.value + fc * math.log((b - c) / (c - a))
    return res


def integrate_log_singular(f: Callable[[np.ndarray], np.ndarray], c: float,
                           interval: Sequence[float],
                           cfg: AdaptiveConfig | None = None) -> AdaptiveResult:
    """``int f`` over ``interval`` when ``f`` has an integrable log singularity at ``c``.

    Each side of ``c`` is mapped by ``x = c +- L u^2``, which turns ``log|x - c|``
    into the vanishing ``u log u``; forced splits are carried over.  ``f`` is
    called as ``f(x, x - c)`` with the offset exact, so integrands can avoid
    cancellation next to ``c``.
    """
    cfg = cfg or AdaptiveConfig()
    a, b = float(interval[0]), float(interval[1])
    c = float(c)
    if not a <= c <= b:
        raise ValueError("singular point must lie in the interval")
    splits = np.asarray(cfg.forced_splits, dtype=float)
    value, error, ok, panels, evals = 0.0, 0.0, True, 0, 0
    for sign, length in ((-1.0, c - a), (1.0, b - c)):
        if length <= 0:
            continue
        inside = splits[(sign * (splits - c) > 0) & (sign * (splits - c) < length)]
        u_splits = np.sqrt(np.abs(inside - c) / length)
        side_cfg = cfg.with_splits(np.concatenate([u_splits, 2.0 ** -np.arange(1, 20)]))

        def g(u, sign=sign, length=length):
            dx = sign * length * u * u
            return np.asarray(f(c + dx, dx)) * (2 * length * u)

        res = adaptive_integrate(g, (0.0, 1.0), side_cfg)
        value = value + res.value
        error += res.error
        ok &= res.converged
        panels += res.panels
        evals += res.evaluations
    return AdaptiveResult(value, error, ok, panels, evals)


def graded_breakpoints(edges: np.ndarray, levels: int = 8, interior: int = 2) -> np.ndarray:
    """Subdivide each ``[edges[i], edges[i+1]]`` geometrically toward both ends.

    Each cell gets breakpoints at fractions ``2**-levels, ..., 1/4`` from
    either end plus ``interior`` equal pieces in the middle.
    """
    edges = np.asarray(edges, dtype=float)
    g = 2.0 ** -np.arange(levels, 1, -1)
    mid = np.linspace(0.25, 0.75, interior + 1)
    frac = np.unique(np.concatenate([[0.0], g, mid, 1.0 - g[::-1], [1.0]]))
    lo, hi = edges[:-1], edges[1:]
    pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    return np.unique(pts.ravel())


def composite_rule(breakpoints: np.ndarray) -> QuadratureRule:
    """15-point Gauss-Legendre on every cell between consecutive breakpoints."""
    bp = np.asarray(breakpoints, dtype=float)
    lo, hi = bp[:-1], bp[1:]
    x = _panel_nodes(lo, hi).ravel()
    w = (0.5 * (hi - lo)[:, None] * _GL_W[None, :]).ravel()
    return QuadratureRule("composite_gauss_legendre", x, w)


def derivative_moment(n: int, coeffs: RecurrenceCoefficients, power: int = 1,
                      N: int | None = None) -> float:
    """``int x^power p_n p_n' w`` by a Gauss-w rule exact for the integrand.

    The integrand is a polynomial of degree ``2n - 1 + power``, so any
    ``N >= n + (power + 1) // 2`` is exact; the default adds a margin.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N = N or max(n + power + 2, 8)
    rule = gauss_w_rule(N, coeffs)
    st = evaluate_pn(rule.nodes, n, coeffs, derivative=True)
    vals = np.ldexp(st.p * st.dp, 2 * st.exponent) * rule.nodes ** power
    return math.fsum(rule.weights * vals)
