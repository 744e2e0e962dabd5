"""Orthonormal polynomials from a symmetric three-term recurrence.

    x p_n(x) = a_{n+1} p_{n+1}(x) + a_n p_{n-1}(x),   p_{-1} = 0,  p_0 = 1.

Values are carried in a scaled frame: each point owns a binary exponent that
is bumped whenever the running values exceed ``2**512``, so degrees in the
thousands never overflow and no sign information is lost near zeros.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .specfun import digamma, pochhammer_log

__all__ = [
    "PollaczekParams",
    "RecurrenceCoefficients",
    "EvaluationBundle",
    "LeadingCoefficients",
    "EigenSolverError",
    "coefficient",
    "evaluate",
    "evaluate_pn",
    "log_leading_gamma",
    "log_leading_gamma_reduced",
    "leading_coefficients",
    "beta_over_gamma",
    "beta_over_gamma_asymptotic",
    "zeros",
]

_RESCALE_AT = 2.0 ** 512
_CHECK_EVERY = 8


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class PollaczekParams:
    """Parameter pair ``(lam, a)`` of the symmetric Pollaczek family."""

    lam: float
    a: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be positive, got {self.lam!r}")
        if not (np.isfinite(self.a) and self.a >= 0):
            raise ValueError(f"a must be nonnegative, got {self.a!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "a", float(self.a))

    @property
    def theorem_range(self) -> bool:
        """True where the F_n limit and the E_n expansion are proved (lam >= 1)."""
        return self.lam >= 1.0

    @property
    def is_gegenbauer(self) -> bool:
        return self.a == 0.0


def coefficient(n, params: PollaczekParams):
    """Recurrence coefficient ``a_n`` (vectorized over n >= 1)."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 1):
        raise ValueError("n must be >= 1")
    lam, a = params.lam, params.a
    c = n + lam + a
    return 0.5 * np.sqrt(n * (n + 2 * lam - 1) / (c * (c - 1)))[()]


class RecurrenceCoefficients:
    """Cached ``a_1..a_N``; either Pollaczek or a user-supplied provider.

    ``provider`` maps an integer array of indices ``k >= 1`` to positive
    coefficients.  The cache grows on demand and is never mutated in place.
    """

    def __init__(self, params: PollaczekParams | None = None, *,
                 provider: Callable[[np.ndarray], np.ndarray] | None = None,
                 size: int = 64):
        if (params is None) == (provider is None):
            raise ValueError("give exactly one of params or provider")
        self.params = params
        if provider is None:
            provider = lambda k: coefficient(k, params)  # noqa: E731
        self._provider = provider
        self._lock = threading.Lock()
        self._cache = np.zeros(1)
        self._extend(max(int(size), 1))

    @classmethod
    def gegenbauer(cls, lam: float, size: int = 64) -> "RecurrenceCoefficients":
        return cls(PollaczekParams(lam, 0.0), size=size)

    def _extend(self, size: int):
        with self._lock:
            if size < len(self._cache):
                return
            self._grow(size)

    def _grow(self, size: int):
        size = max(size, 2 * (len(self._cache) - 1))
        k = np.arange(1, size + 1)
        vals = np.asarray(self._provider(k), dtype=float)
        if vals.shape != k.shape or np.any(~(vals > 0)):
            raise ValueError("recurrence coefficients must be positive")
        cache = np.empty(size + 1)
        cache[0] = 0.0
        cache[1:] = vals
        cache.flags.writeable = False
        self._cache = cache

    def upto(self, n: int) -> np.ndarray:
        """Read-only view ``[0, a_1, ..., a_n]`` (index 0 is a placeholder)."""
        self._extend(n + 1)
        # the cache only ever grows, so this slice is always long enough
        return self._cache[: n + 1]

    def __getitem__(self, k: int) -> float:
        if k < 1:
            raise IndexError("coefficients are indexed from 1")
        return float(self.upto(k)[k])


def _as_coeffs(coeffs) -> RecurrenceCoefficients:
    if isinstance(coeffs, PollaczekParams):
        return RecurrenceCoefficients(coeffs)
    return coeffs


@dataclass
class EvaluationBundle:
    """Scaled values ``p_k(x) = scaled_values[k] * 2**exponent`` for k = 0..n."""

    x: float
    n: int
    scaled_values: np.ndarray
    exponent: int
    derivative_scaled: np.ndarray | None = None

    def value(self, k: int | None = None) -> float:
        k = self.n if k is None else k
        return float(np.ldexp(self.scaled_values[k], self.exponent))

    def derivative(self, k: int | None = None) -> float:
        if self.derivative_scaled is None:
            raise ValueError("bundle was built without derivatives")
        k = self.n if k is None else k
        return float(np.ldexp(self.derivative_scaled[k], self.exponent))


@dataclass
class _ScaledState:
    """Vectorized recurrence output at many points (internal)."""

    p: np.ndarray            # p_n scaled
    p_prev: np.ndarray       # p_{n-1} scaled
    exponent: np.ndarray     # int64 per point
    dp: np.ndarray | None = None
    sumsq: np.ndarray | None = None   # sum_{k<n} p_k^2 scaled by 4**exponent
    history: list = field(default_factory=list)

    def log_abs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.p)) + self.exponent * np.log(2.0)


def _run(x, n: int, coeffs: RecurrenceCoefficients, *, derivative=False,
         sumsq=False, keep=False) -> _ScaledState:
    x = np.asarray(x, dtype=float)
    a = coeffs.upto(n + 1)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    e = np.zeros(x.shape, dtype=np.int64)
    dp_prev = np.zeros_like(x) if derivative else None
    dp = np.zeros_like(x) if derivative else None
    ss = np.zeros_like(x) if sumsq else None
    hist = []
    if keep:
        hist.append((p.copy(), None if dp is None else dp.copy(), e.copy()))
    for k in range(n):
        if sumsq:
            ss = ss + p * p
        # x p_k = a_{k+1} p_{k+1} + a_k p_{k-1}
        inv = 1.0 / a[k + 1]
        p_next = (x * p - a[k] * p_prev) * inv
        if derivative:
            dp_next = (x * dp + p - a[k] * dp_prev) * inv
            dp_prev, dp = dp, dp_next
        p_prev, p = p, p_next
        if (k + 1) % _CHECK_EVERY == 0 or k == n - 1:
            big = np.maximum(np.abs(p), np.abs(p_prev))
            if derivative:
                big = np.maximum(big, np.maximum(np.abs(dp), np.abs(dp_prev)))
            if np.any(big > _RESCALE_AT):
                shift = np.where(big > _RESCALE_AT, np.frexp(big)[1], 0)
                p = np.ldexp(p, -shift)
                p_prev = np.ldexp(p_prev, -shift)
                if derivative:
                    dp = np.ldexp(dp, -shift)
                    dp_prev = np.ldexp(dp_prev, -shift)
                if sumsq:
                    ss = np.ldexp(ss, -2 * shift)
                e = e + shift
        if keep:
            hist.append((p.copy(), None if dp is None else dp.copy(), e.copy()))
    return _ScaledState(p=p, p_prev=p_prev, exponent=e, dp=dp, sumsq=ss,
                        history=hist)


def evaluate(x: float, n: int, coeffs, with_derivative: bool = False) -> EvaluationBundle:
    """Evaluate ``p_0(x) .. p_n(x)`` (and optionally derivatives) at one point."""
    x = float(x)
    if abs(x) > 1.0:
        raise ValueError("x must lie in [-1, 1]")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    coeffs = _as_coeffs(coeffs)
    st = _run(np.array(x), n, coeffs, derivative=with_derivative, keep=True)
    e_final = int(st.exponent)
    vals = np.array([np.ldexp(h[0], int(h[2]) - e_final) for h in st.history], dtype=float)
    ders = None
    if with_derivative:
        ders = np.array([np.ldexp(h[1], int(h[2]) - e_final) for h in st.history], dtype=float)
    return EvaluationBundle(x=x, n=n, scaled_values=vals, exponent=e_final,
                            derivative_scaled=ders)


def evaluate_pn(x, n: int, coeffs, *, derivative=False, sumsq=False) -> _ScaledState:
    """Vectorized ``p_n`` at many points in the scaled frame (no history)."""
    return _run(x, n, _as_coeffs(coeffs), derivative=derivative, sumsq=sumsq)


@dataclass(frozen=True)
class LeadingCoefficients:
    n: int
    log_gamma_n: float
    beta_over_gamma: float


def log_leading_gamma_reduced(n: int, params: PollaczekParams) -> float:
    """``log gamma_n - n log 2`` from the Pochhammer closed form."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return 0.0
    lam, a = params.lam, params.a
    return 0.5 * float(pochhammer_log(lam + a + 1, n) + pochhammer_log(lam + a, n)
                       - pochhammer_log(1.0, n) - pochhammer_log(2 * lam, n))


def log_leading_gamma(n: int, params: PollaczekParams) -> float:
    """``log gamma_n`` where gamma_n is the leading coefficient of p_n."""
    return n * np.log(2.0) + log_leading_gamma_reduced(n, params)


def beta_over_gamma(n: int, coeffs) -> float:
    """``beta_n / gamma_n = -sum_{k=1}^{n-1} a_k^2`` (zero for n = 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _as_coeffs(coeffs).upto(max(n - 1, 1))[1:n]
    return -float(np.sum(a * a))


def beta_over_gamma_asymptotic(n: int, params: PollaczekParams) -> float:
    """Large-n expansion of beta_n/gamma_n, accurate to O(1/n)."""
    lam, a = params.lam, params.a
    tail = 0.0 if a == 0 else -0.5 * a * float(np.real(digamma(a + lam)))
    return -n / 4 + 0.5 * a * np.log(n) - (a - lam) / 4 + tail


def leading_coefficients(n: int, params: PollaczekParams,
                         coeffs: RecurrenceCoefficients | None = None) -> LeadingCoefficients:
    coeffs = coeffs or RecurrenceCoefficients(params)
    return LeadingCoefficients(n=n, log_gamma_n=log_leading_gamma(n, params),
                               beta_over_gamma=beta_over_gamma(max(n, 1), coeffs))


def zeros(n: int, coeffs, polish: bool = True) -> np.ndarray:
    """Zeros of ``p_n``: eigenvalues of the n x n Jacobi matrix, ascending.

    The spectrum is symmetrized (the recurrence has zero diagonal) and
    optionally refined by one Newton step on the recurrence.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    coeffs = _as_coeffs(coeffs)
    off = np.array(coeffs.upto(n)[1:n])
    if n == 1:
        return np.zeros(1)
    try:
        z = eigvalsh_tridiagonal(np.zeros(n), off, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"tridiagonal eigensolve failed for n={n}") from exc
    z = np.sort(z)
    if polish:
        st = _run(z, n, coeffs, derivative=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            step = np.where(st.dp != 0, st.p / st.dp, 0.0)
        # a Newton step must not leave the bracket formed by the neighbours
        gap = np.diff(z).min() if n > 1 else 1.0
        step = np.clip(step, -0.25 * gap, 0.25 * gap)
        z = z - step
    z = 0.5 * (z - z[::-1])
    if n % 2 == 1:
        z[n // 2] = 0.0
    return z
