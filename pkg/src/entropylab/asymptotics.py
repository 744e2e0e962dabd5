"""Computed quantities side by side with their large-n predictions."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import (LOG_PI_MINUS_ONE, QuadratureNotConverged, compute_report,
                      energy_scaled, predicted_G, tau)
from .equilibrium import DegenerateFieldError, levin_integral, mrs_number
from .orthopoly import PollaczekParams
from .quadrature import AdaptiveConfig

__all__ = [
    "ResidualRow",
    "ResidualTable",
    "predicted_E",
    "build_table",
    "dyadic_subsequence",
    "trend_ok",
    "TREND_SLACK",
    "VANISHING_COLUMNS",
]

TREND_SLACK = 1.2

# columns that should tend to zero
VANISHING_COLUMNS = ("E_residual", "G_residual", "F_limit_residual",
                     "energy_scaled_residual", "mrs_scaled")


def predicted_E(n: int, params: PollaczekParams) -> float:
    """``-2 a log n + tau(lam, a)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return -2 * params.a * math.log(n) + tau(params)


def dyadic_subsequence(n_values) -> list[int]:
    """Greedy chain ``n_0 < n_1 < ...`` from ``n_values`` with ``n_{k+1} >= 2 n_k``."""
    out = []
    for n in sorted(int(v) for v in n_values):
        if not out or n >= 2 * out[-1]:
            out.append(n)
    return out


def trend_ok(values, slack: float = TREND_SLACK) -> bool:
    """Magnitudes non-increasing along the sequence, each step allowed to grow by ``slack``."""
    mags = np.abs(np.asarray(values, dtype=float))
    if not np.all(np.isfinite(mags)):
        return False
    return bool(np.all(mags[1:] <= slack * mags[:-1]))


@dataclass
class ResidualRow:
    n: int
    E: float = math.nan
    predicted_E: float = math.nan
    E_residual: float = math.nan
    G: float = math.nan
    predicted_G: float = math.nan
    G_residual: float = math.nan
    F: float = math.nan
    F_limit_residual: float = math.nan
    energy_scaled_residual: float = math.nan
    mrs_scaled: float = math.nan
    levin_ratio: float = math.nan
    ok: bool = True
    note: str = ""


@dataclass
class ResidualTable:
    params: PollaczekParams
    n_values: list
    rows: list = field(default_factory=list)

    @property
    def theorem_range(self) -> bool:
        return self.params.theorem_range

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def trend(self, name: str, slack: float = TREND_SLACK) -> bool:
        """Trend gate on the dyadic subsequence of the table's n values."""
        keep = set(dyadic_subsequence(self.n_values))
        vals = [getattr(r, name) for r in self.rows if r.n in keep]
        return trend_ok(vals, slack)

    def asserted_columns(self) -> tuple:
        """Columns whose decay is claimed for these parameters."""
        if self.theorem_range:
            return VANISHING_COLUMNS
        # outside lam >= 1 only the G expansion is proved
        return ("G_residual", "energy_scaled_residual", "mrs_scaled")

    def all_finite(self) -> bool:
        cols = [c for c in VANISHING_COLUMNS if c != "mrs_scaled" or self._has_mrs]
        return all(np.all(np.isfinite(self.column(c))) for c in cols)

    @property
    def _has_mrs(self) -> bool:
        return not (self.params.a == 0 and self.params.lam <= 0.5)

    def to_records(self) -> list[dict]:
        return [asdict(r) for r in self.rows]


def build_table(params: PollaczekParams, n_values, cfg: AdaptiveConfig | None = None) -> ResidualTable:
    """One row per n; failures are recorded in the row and do not abort the table."""
    ns = [int(n) for n in n_values]
    if ns != sorted(ns):
        raise ValueError("n_values must be sorted ascending")
    if ns and ns[0] < 1:
        raise ValueError("n values must be >= 1")
    table = ResidualTable(params=params, n_values=ns)
    for n in ns:
        row = ResidualRow(n=n)
        try:
            rep = compute_report(n, params, cfg, cross_check=False)
            row.E, row.G, row.F = rep.E, rep.G, rep.F
            row.predicted_E = predicted_E(n, params)
            row.E_residual = rep.E - row.predicted_E
            row.predicted_G = predicted_G(n, params)
            row.G_residual = rep.G - row.predicted_G
            row.F_limit_residual = rep.F - LOG_PI_MINUS_ONE
            row.energy_scaled_residual = energy_scaled(n, rep.E, params) + 1 - 2 * params.a
            row.ok = rep.converged
        except (QuadratureNotConverged, FloatingPointError, ValueError) as exc:
            row.ok, row.note = False, str(exc)
        try:
            row.mrs_scaled = n * mrs_number(n, params).gap - params.a
            row.levin_ratio = row.E / levin_integral(n, params, cfg)
        except DegenerateFieldError:
            row.note = row.note or "no MRS number for this field"
        except RuntimeError as exc:
            row.ok, row.note = False, str(exc)
        table.rows.append(row)
    return table
