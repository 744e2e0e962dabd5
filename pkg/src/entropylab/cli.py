"""Command-line front end: tables of entropies, MRS numbers, identities and checks.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
non-convergence (rows are still written, flagged in the ``converged`` column).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import entropy as ent
from .asymptotics import build_table, predicted_E
from .equilibrium import (DegenerateFieldError, cosine_approx_l1, equilibrium_profile,
                          mrs_closed_form, mrs_number)
from .orthopoly import PollaczekParams, beta_over_gamma, evaluate_pn
from .quadrature import AdaptiveConfig, adaptive_integrate, derivative_moment, gauss_w_rule
from .weight import log_weight_theta, validate_field_class

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3
COMMANDS = ("entropy", "figures", "mrs", "identities", "verify", "equilibrium")
FIGURE_LAMBDAS = (5.0, 15.0)
FIGURE_AS = (5.0, 10.0, 15.0)


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    lam: float = 1.0
    a: float = 0.0
    n_max: int = 100
    n_list: tuple | None = None
    tol: float = 1e-9
    format: str = "csv"
    output_path: str | None = None
    cross_check: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not 1 <= self.n_max <= 5000:
            raise UsageError("--n-max must lie in [1, 5000]")
        if self.n_list is not None and any(not 1 <= n <= 5000 for n in self.n_list):
            raise UsageError("--n-list entries must lie in [1, 5000]")
        if not self.tol >= 1e-13:
            raise UsageError("--tol must be >= 1e-13")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")

    @property
    def params(self) -> PollaczekParams:
        try:
            return PollaczekParams(self.lam, self.a)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    @property
    def degrees(self) -> list[int]:
        if self.n_list is not None:
            return sorted(set(self.n_list))
        return list(range(1, self.n_max + 1))

    @property
    def quad(self) -> AdaptiveConfig:
        # entropies need a few digits beyond the reported tolerance
        t = min(self.tol, 1e-9) * 1e-2
        return AdaptiveConfig(abs_tol=t, rel_tol=t)


def worker_count() -> int:
    cap = os.environ.get("ENTROPYLAB_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError("ENTROPYLAB_THREADS must be an integer") from None
    return n


def _parallel_map(fn, items):
    """Ordered map; results come back in input order whatever the thread count."""
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    """CSV (header, comma, 17 significant digits, LF) or JSON lines."""
    if fmt == "json":
        def clean(v):
            if isinstance(v, (float, np.floating)):
                return float(v) if math.isfinite(v) else None
            if isinstance(v, np.integer):
                return int(v)
            if isinstance(v, np.bool_):
                return bool(v)
            return v
        return "".join(json.dumps({k: clean(v) for k, v in r.items()}) + "\n" for r in rows)
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0].keys()))
    for r in rows:
        writer.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig, default_name: str | None = None):
    if cfg.output_path:
        path = Path(cfg.output_path)
        if path.is_dir() and default_name:
            path = path / default_name
        path.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _entropy_row(n: int, params: PollaczekParams, quad: AdaptiveConfig, cross_check: bool) -> dict:
    r = ent.compute_report(n, params, quad, cross_check=cross_check)
    return {
        "n": n, "E": r.E, "F": r.F, "G": r.G, "E_alt": r.E_alt,
        "predicted_E": r.predicted_E, "predicted_G": r.predicted_G,
        "E_residual": r.E_residual, "G_residual": r.G_residual,
        "F_limit_residual": r.F_limit_residual, "method_error": r.method_error,
        "quadrature_error": r.quadrature_error, "converged": r.converged,
    }


def cmd_entropy(cfg: RunConfig) -> int:
    params, quad = cfg.params, cfg.quad
    rows = _parallel_map(lambda n: _entropy_row(n, params, quad, cfg.cross_check), cfg.degrees)
    _emit(render(rows, cfg.format), cfg, "entropy.csv" if cfg.format == "csv" else "entropy.json")
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_NONCONVERGED


def cmd_figures(cfg: RunConfig) -> int:
    """Two tables over lam in {5, 15}, a in {5, 10, 15}: E_n and E_n minus its prediction."""
    out_dir = Path(cfg.output_path or ".")
    if out_dir.exists() and not out_dir.is_dir():
        raise UsageError("figures --output must be a directory")
    out_dir.mkdir(parents=True, exist_ok=True)
    ns = cfg.degrees
    series, resid = [], []
    ok = True
    for lam in FIGURE_LAMBDAS:
        for a in FIGURE_AS:
            params = PollaczekParams(lam, a)

            def one(n, params=params):
                m, e, g, err, conv = ent.density_components(n, params, cfg.quad)
                return n, e, conv

            for n, e, conv in _parallel_map(one, ns):
                ok &= bool(conv)
                series.append({"lambda": lam, "a": a, "n": n, "E": e, "converged": conv})
                resid.append({"lambda": lam, "a": a, "n": n,
                              "E_minus_predicted": e - predicted_E(n, params), "converged": conv})
    ext = "csv" if cfg.format == "csv" else "jsonl"
    (out_dir / f"entropy_series.{ext}").write_text(render(series, cfg.format), encoding="utf-8", newline="\n")
    (out_dir / f"entropy_residual_series.{ext}").write_text(render(resid, cfg.format), encoding="utf-8", newline="\n")
    return EXIT_OK if ok else EXIT_NONCONVERGED


def cmd_mrs(cfg: RunConfig) -> int:
    params = cfg.params
    rows = []
    for n in cfg.degrees:
        try:
            s = mrs_number(n, params)
        except DegenerateFieldError as exc:
            raise UsageError(str(exc)) from None
        row = {"n": n, "alpha_n": s.alpha_n, "n_one_minus_alpha": n * s.gap,
               "residual": s.residual, "iterations": s.iterations}
        if params.a == 0:
            row["closed_form"] = mrs_closed_form(n, params.lam)
        rows.append(row)
    _emit(render(rows, cfg.format), cfg, "mrs.csv")
    return EXIT_OK


def _identity_rows(params: PollaczekParams, degrees) -> list[dict]:
    coeffs = ent.cached_coefficients(params)
    rows = []
    for n in degrees:
        v1 = derivative_moment(n, coeffs, 1)
        rows.append({"identity": "x_p_dp", "n": n, "value": v1, "expected": float(n),
                     "residual": v1 - n})
        if n >= 2:
            v3 = derivative_moment(n, coeffs, 3)
            an1, an, anm1 = coeffs[n + 1], coeffs[n], coeffs[n - 1]
            bg_nm2 = beta_over_gamma(n, coeffs) / (an * anm1)
            exp3 = n * (an1 ** 2 + an ** 2) - 2 * an * anm1 * bg_nm2
            rows.append({"identity": "x3_p_dp", "n": n, "value": v3, "expected": exp3,
                         "residual": v3 - exp3})
    return rows


def cmd_identities(cfg: RunConfig) -> int:
    params = cfg.params
    rows = _identity_rows(params, [n for n in cfg.degrees if n <= 200])
    j = ent.gamma_shape_integral(params)
    jc = ent.gamma_shape_closed_form(params)
    rows.append({"identity": "gamma_shape", "n": 0, "value": j, "expected": jc, "residual": j - jc})
    b1, b2, b3 = ent.constants_B(params)
    b12 = ent.s_field_average(params)
    rows.append({"identity": "B1_minus_2B2", "n": 0, "value": b1 - 2 * b2, "expected": b12,
                 "residual": b1 - 2 * b2 - b12})
    chain = b1 - 2 * b2 + 0.5 + b3
    target = ent.predicted_G(1, params)
    rows.append({"identity": "G_constant_chain", "n": 0, "value": chain, "expected": target,
                 "residual": chain - target})
    _emit(render(rows, cfg.format), cfg, "identities.csv")
    bad = any(abs(r["residual"]) > max(cfg.tol, 1e-7) * max(1.0, abs(r["expected"])) for r in rows)
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_equilibrium(cfg: RunConfig) -> int:
    params = cfg.params
    degrees = cfg.n_list or (cfg.n_max,)
    rows = []
    theta = np.linspace(0.0, math.pi, 65)
    for n in sorted(set(degrees)):
        try:
            prof = equilibrium_profile(n, params)
        except DegenerateFieldError as exc:
            raise UsageError(str(exc)) from None
        phi = prof.phi_at(theta)
        for th, ph in zip(theta, phi):
            rows.append({"n": n, "alpha_n": prof.alpha_n, "theta": float(th), "phi": float(ph),
                         "phi_minus_theta": float(ph - th),
                         "phi_prime": float(prof.phi_prime_at(th))})
    _emit(render(rows, cfg.format), cfg, "equilibrium.csv")
    return EXIT_OK


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool | None  # None: skipped

    def line(self) -> str:
        status = "SKIP" if self.passed is None else ("PASS" if self.passed else "FAIL")
        return f"{status}  {self.name:<44s} value={self.value:.6g}  tol={self.tolerance:.3g}"


def verification_checks(params: PollaczekParams, tol: float = 1e-9) -> list[Check]:
    """Invariants of every module at reduced scale (n <= 100)."""
    def gate(base):
        return max(base, tol)

    checks: list[Check] = []

    def add(name, value, base, skip=False):
        t = gate(base)
        checks.append(Check(name, float(value), t, None if skip else bool(abs(value) < t)))

    mass = adaptive_integrate(lambda th: np.exp(log_weight_theta(th, params)) * np.sin(th),
                              (0.0, math.pi)).value
    add("weight unit mass", mass - 1, 1e-10)
    fc = validate_field_class(params)
    checks.append(Check("field class conditions a-f", float(sum(fc.passed.values())), 6.0,
                        fc.all_passed))
    coeffs = ent.cached_coefficients(params)
    rule = gauss_w_rule(256, coeffs)
    states = [evaluate_pn(rule.nodes, k, coeffs) for k in range(21)]
    vals = np.array([np.ldexp(st.p, st.exponent) for st in states])
    gram = (vals * rule.weights) @ vals.T
    add("gauss-w Gram matrix defect", np.max(np.abs(gram - np.eye(21))), 1e-9)
    add("gauss-w total mass", rule.total_mass - 1, 1e-12)
    ident = _identity_rows(params, range(1, 51))
    add("x p_n p_n' moment identity (n<=50)", max(abs(r["residual"]) for r in ident
                                                    if r["identity"] == "x_p_dp"), 1e-8)
    add("x^3 p_n p_n' moment identity (n<=50)", max(abs(r["residual"]) for r in ident
                                                      if r["identity"] == "x3_p_dp"), 1e-8)
    ns = (1, 2, 5, 10, 25, 50, 100)
    reps = [ent.compute_report(n, params) for n in ns]
    add("E direct vs potential (n<=100)", max(r.method_error for r in reps), 1e-6)
    add("E - F - G", max(abs(r.E - r.F - r.G) for r in reps), 1e-9)
    add("gamma-shape integral vs closed form",
        ent.gamma_shape_integral(params) - ent.gamma_shape_closed_form(params), 1e-8)
    b1, b2, b3 = ent.constants_B(params)
    add("B1 - 2 B2 vs direct average", b1 - 2 * b2 - ent.s_field_average(params), 1e-8)
    add("G constant chain", b1 - 2 * b2 + 0.5 + b3 - (ent.predicted_G(1, params)), 1e-7)
    add("predicted E - predicted G - (log pi - 1)",
        predicted_E(100, params) - ent.predicted_G(100, params) - ent.LOG_PI_MINUS_ONE, 1e-12)
    confining = not (params.a == 0 and params.lam <= 0.5)
    if confining:
        sols = [mrs_number(n, params) for n in (10, 20, 40, 80)]
        add("MRS defect / n", max(abs(s.residual) / s.n for s in sols), 1e-9)
        alphas = [s.alpha_n for s in sols]
        checks.append(Check("MRS numbers increasing", float(np.min(np.diff(alphas))), 0.0,
                            bool(np.all(np.diff(alphas) > 0))))
        if params.a == 0:
            add("MRS closed form (a=0)",
                max(abs(s.alpha_n - mrs_closed_form(s.n, params.lam)) for s in sols), 1e-10)
        prof = equilibrium_profile(50, params)
        add("Phi normalization", prof.normalization_defect, 1e-6)
        # increments near theta = pi fall below ulp(pi), so strictness is read off Phi'
        inner = prof.phi_prime[1:-1]
        checks.append(Check("Phi increasing on grid", float(np.min(inner)), 0.0,
                            bool(np.all(inner > 0) and np.all(np.diff(prof.phi) >= 0))))
        prof100 = equilibrium_profile(100, params)
        checks.append(Check("Phi' L1 defect decreasing (n=50 -> 100)",
                            prof100.phi_l1_defect - prof.phi_l1_defect, 0.0,
                            prof100.phi_l1_defect < prof.phi_l1_defect))
    in_range = params.theorem_range
    if confining and in_range:
        c20, c100 = cosine_approx_l1(20, params), cosine_approx_l1(100, params)
        checks.append(Check("cosine model L1 distance decreasing (n=20 -> 100)",
                            c100.l1_distance - c20.l1_distance, 0.0,
                            c100.l1_distance < c20.l1_distance))
    table = build_table(params, [25, 50, 100])
    for col in ("F_limit_residual", "E_residual"):
        checks.append(Check(f"{col} trend (25, 50, 100)", float(table.column(col)[-1]),
                            0.0, table.trend(col) if in_range else None))
    checks.append(Check("G_residual trend (25, 50, 100)", float(table.column("G_residual")[-1]),
                        0.0, table.trend("G_residual")))
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    checks = verification_checks(cfg.params, cfg.tol)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if c.passed is False]
    print(f"{len(checks) - len(failed)} of {len(checks)} checks passed or skipped "
          f"in {time.perf_counter() - t0:.1f} s")
    return EXIT_VERIFY if failed else EXIT_OK


def _parse_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError("--n-list expects comma-separated integers") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entropylab",
                                description="Entropies and equilibrium data for symmetric Pollaczek polynomials.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--n-list", type=_parse_list, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None)
    p.add_argument("--no-cross-check", action="store_true",
                   help="skip the potential-method value of E_n (entropy command)")
    return p


_DEFAULT_N_MAX = {"figures": 500, "entropy": 100, "mrs": 100, "identities": 50,
                  "verify": 100, "equilibrium": 100}

_HANDLERS = {"entropy": cmd_entropy, "figures": cmd_figures, "mrs": cmd_mrs,
             "identities": cmd_identities, "verify": cmd_verify, "equilibrium": cmd_equilibrium}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(command=ns.command, lam=ns.lam, a=ns.a,
                        n_max=ns.n_max or _DEFAULT_N_MAX[ns.command], n_list=ns.n_list,
                        tol=ns.tol, format=ns.format, output_path=ns.output,
                        cross_check=not ns.no_cross_check)
        cfg.params  # validates lambda and a
        return _HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ent.QuadratureNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
