"""Batch command-line interface.

One invocation runs one subcommand against one parameter set, assembled
from an optional JSON config file, repeatable ``--set key=value``
overrides, and named flags (training order: config < --set < flags).
All numeric output is serialized with 12 significant digits so repeated
runs with identical inputs produce byte-identical files.

Exit codes: 0 success, 1 configuration or usage error, 2 hypothesis
violation, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Optional

import numpy as np

from .delay import tau_star
from .exceptions import HypothesisError, NumericalError
from .linear import (boundary_stability, hopf_points_in_r, r_star,
                     turing_analysis, turing_curve)
from .model import (ModelParams, check_hypotheses, delta0,
                    positive_equilibrium, rho0)
from .normal_form import (center_manifold_terms, eigenpair, g_coefficients,
                          hopf_coefficients)
from .sim import (Grid, amplitude_sweep, detect_orbit, lyapunov_value,
                  simulate_ode, simulate_pde)
from . import delay as delay_mod
from . import linear as linear_mod
from . import verify as verify_mod

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_THREAD_ENV = "MUSSELBED_THREADS"


class CliError(Exception):
    """Carries the exit code together with the user-facing message."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    """Everything one invocation needs: command, parameters, options."""

    command: str
    params: ModelParams
    options: dict[str, Any] = field(default_factory=dict)
    out_dir: str = "."


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _jsonable(obj: Any) -> Any:
    """Recursively convert values to JSON-friendly, precision-pinned form."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, complex):
        return {"re": float(_fmt(obj.real)), "im": float(_fmt(obj.imag))}
    if isinstance(obj, np.floating):
        return _jsonable(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.complexfloating):
        return _jsonable(complex(obj))
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def _write_text(out_dir: str, name: str, text: str) -> None:
    try:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {name}: {exc}") from exc


def _write_json(out_dir: str, name: str, payload: Any) -> None:
    _write_text(out_dir, name,
                json.dumps(_jsonable(payload), indent=2, sort_keys=True)
                + "\n")


def _write_csv(out_dir: str, name: str, header: list[str],
               rows: list[list[Any]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(_fmt(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    _write_text(out_dir, name, "\n".join(lines) + "\n")


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(
            EXIT_USAGE,
            f"config parse error in {path} at line {exc.lineno} column "
            f"{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise CliError(EXIT_USAGE,
                       f"config {path} must hold a JSON object at top level")
    return data


def _apply_set(config: dict[str, Any], assignment: str) -> None:
    if "=" not in assignment:
        raise CliError(EXIT_USAGE,
                       f"--set needs key=value, got {assignment!r}")
    key, raw = assignment.split("=", 1)
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        nxt = node.setdefault(part, {})
        if not isinstance(nxt, dict):
            raise CliError(EXIT_USAGE,
                           f"--set path {key!r} collides with a scalar")
        node = nxt
    node[parts[-1]] = value


_PARAM_FIELDS = ("r", "alpha", "gamma", "d", "tau", "l")


def _build_params(config: dict[str, Any],
                  args: argparse.Namespace) -> ModelParams:
    raw = dict(config.get("params", {}))
    unknown = set(raw) - set(_PARAM_FIELDS)
    if unknown:
        raise CliError(EXIT_USAGE,
                       f"unknown parameter field(s) in config: "
                       f"{', '.join(sorted(unknown))}")
    for name in _PARAM_FIELDS:
        flag = getattr(args, f"param_{name}", None)
        if flag is not None:
            raw[name] = flag
    missing = [n for n in ("r", "alpha", "gamma") if n not in raw]
    if missing:
        raise CliError(EXIT_USAGE,
                       f"missing required parameter(s): {', '.join(missing)}")
    try:
        values = {k: float(v) for k, v in raw.items()}
        return ModelParams(**values)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_USAGE, f"invalid model parameters: {exc}") from exc


def _opt(config: dict[str, Any], args: argparse.Namespace, name: str,
         cast, default):
    """Option resolution: named flag beats config entry beats default."""
    flag = getattr(args, name.replace("-", "_"), None)
    if flag is not None:
        return flag
    if name in config:
        try:
            return cast(config[name])
        except (TypeError, ValueError) as exc:
            raise CliError(EXIT_USAGE,
                           f"config option {name!r}: {exc}") from exc
    return default


def _cmd_classify(cfg: RunConfig) -> int:
    p = cfg.params
    report = check_hypotheses(p)
    payload: dict[str, Any] = {
        "params": {k: getattr(p, k) for k in _PARAM_FIELDS},
        "hypotheses": {"h1": report.h1, "h2": report.h2, "h3": report.h3,
                       "details": dict(report.details)},
        "bare_state_stability": boundary_stability(p),
    }
    lines = [f"recruitment regime: "
             f"{'coexistence possible' if report.h1 else 'no positive state'}",
             f"bare-sediment state (0, 1): {payload['bare_state_stability']}"]
    if report.h1:
        eq = positive_equilibrium(p)
        turing = turing_analysis(p, strict=False)
        payload["equilibrium"] = {"m": eq.m, "a": eq.a}
        payload["pattern_analysis"] = {
            "verdict": turing.verdict,
            "marginal": turing.marginal,
            "band_slope": turing.g_r,
            "band_discriminant": turing.lambda_disc,
            "critical_wavenumber_sq": turing.kc_squared,
            "min_mode_value": turing.min_mode_value,
            "discrete_min_n": turing.discrete_min_n,
            "discrete_min_value": turing.discrete_min_value,
        }
        lines.append(f"coexistence state: m* = {_fmt(eq.m)}, "
                     f"a* = {_fmt(eq.a)}")
        lines.append(f"spatial stability verdict: {turing.verdict}")
    _write_json(cfg.out_dir, "classify_report.json", payload)
    print("\n".join(lines))
    return EXIT_OK


def _cmd_hopf_curve(cfg: RunConfig) -> int:
    p = cfg.params
    samples = int(cfg.options.get("samples", 400))
    points = hopf_points_in_r(p.alpha, p.gamma)
    star = r_star(p.alpha)
    lo, hi = 1.0 + 1e-9, 1.0 / p.alpha - 1e-9
    rows = []
    for r in np.linspace(lo, hi, samples):
        q = replace(p, r=float(r))
        rows.append([float(r), delta0(q) ** 2 - rho0(q)])
    _write_csv(cfg.out_dir, "hopf_margin.csv", ["r", "oscillation_margin"],
               rows)
    _write_csv(cfg.out_dir, "hopf_points.csv",
               ["r", "transversality_sign"],
               [[pt.r, pt.transversality_sign] for pt in points])
    _write_json(cfg.out_dir, "hopf_report.json", {
        "alpha": p.alpha, "gamma": p.gamma, "r_star": star,
        "points": [{"r": pt.r, "transversality_sign": pt.transversality_sign}
                   for pt in points]})
    if points:
        listing = ", ".join(_fmt(pt.r) for pt in points)
        print(f"oscillation onset values of r: {listing}")
    else:
        print("no oscillation onset in the admissible r range")
    return EXIT_OK


def _cmd_turing_curve(cfg: RunConfig) -> int:
    p = cfg.params
    amin = float(cfg.options.get("alpha_min", 0.05))
    amax = float(cfg.options.get("alpha_max", 0.95))
    resolution = int(cfg.options.get("resolution", 50))
    pts = turing_curve((amin, amax), p.d, resolution)
    _write_csv(cfg.out_dir, "turing_curve.csv", ["alpha", "r", "branch"],
               [[pt.alpha, pt.r, pt.branch] for pt in pts])
    _write_json(cfg.out_dir, "turing_report.json", {
        "d": p.d, "alpha_range": [amin, amax], "resolution": resolution,
        "points": len(pts)})
    print(f"pattern-onset curve: {len(pts)} points written")
    return EXIT_OK


def _cmd_tau_star(cfg: RunConfig) -> int:
    p = cfg.params
    n_max = cfg.options.get("n_max")
    j_max = int(cfg.options.get("j_max", 0))
    ts = tau_star(p, n_max=None if n_max is None else int(n_max),
                  j_max=j_max)
    _write_csv(cfg.out_dir, "critical_delays.csv",
               ["n", "j", "omega", "tau", "transversality"],
               [[hp.n, hp.j, hp.omega, hp.tau_crit, hp.transversality]
                for hp in ts.first_crossings])
    _write_json(cfg.out_dir, "tau_star_report.json", {
        "tau_star": ts.tau, "critical_mode": ts.n0, "omega": ts.omega,
        "crossing_modes": list(ts.s0)})
    print(f"first critical delay: tau* = {_fmt(ts.tau)} at mode {ts.n0}, "
          f"frequency {_fmt(ts.omega)}")
    return EXIT_OK


def _cmd_normal_form(cfg: RunConfig) -> int:
    p = cfg.params
    ts = tau_star(p)
    ep = eigenpair(p, ts.n0, ts.omega, ts.tau)
    g = g_coefficients(p, ep)
    cm = center_manifold_terms(p, ep, g)
    hc = hopf_coefficients(p)
    payload = {
        "tau_star": ts.tau, "critical_mode": ts.n0, "omega": ts.omega,
        "eigenpair": {"q1": ep.q1, "q2": ep.q2, "m_norm": ep.m_norm},
        "g20": hc.g20, "g11": hc.g11, "g02": hc.g02, "g21": hc.g21,
        "c1": hc.c1, "mu2": hc.mu2, "beta2": hc.beta2, "t2": hc.t2,
        "direction": hc.direction, "orbit_stability": hc.orbit_stability,
        "period_trend": hc.period_trend,
        "manifold": {
            "w20_at_delay": list(cm.w20_m1), "w20_at_zero": list(cm.w20_0),
            "w11_at_delay": list(cm.w11_m1), "w11_at_zero": list(cm.w11_0),
            "e1": {str(n): list(v) for n, v in sorted(cm.e1.items())},
            "e2": {str(n): list(v) for n, v in sorted(cm.e2.items())},
            "f_hat_20": list(cm.f_hat_20), "f_hat_11": list(cm.f_hat_11),
            "q1_term": cm.q1_term, "q2_term": cm.q2_term,
        },
    }
    _write_json(cfg.out_dir, "normal_form_report.json", payload)
    print(f"c1(0) = {_fmt(hc.c1.real)} {hc.c1.imag:+.12g}i; "
          f"bifurcation {hc.direction}, orbit {hc.orbit_stability}, "
          f"rescaled period {hc.period_trend}")
    return EXIT_OK


def _history_factory(p: ModelParams, amplitude: float, wavenumber: int):
    eq = positive_equilibrium(p)

    def history(x: np.ndarray, t: float):
        bump = amplitude * np.cos(wavenumber * x / p.l)
        return eq.m + bump, eq.a - bump

    return history


_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot the time series and space-time field written next to this file.\"\"\"
import csv
import os.path as op

import matplotlib.pyplot as plt

here = op.dirname(op.abspath(__file__))
with open(op.join(here, "timeseries.csv")) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, axes = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
axes[0].plot(t, [float(r["mean_m"]) for r in rows], label="mussel")
axes[0].plot(t, [float(r["mean_a"]) for r in rows], label="algae")
axes[0].set_ylabel("spatial mean")
axes[0].legend()
axes[1].plot(t, [float(r["min_m"]) for r in rows], label="min m")
axes[1].plot(t, [float(r["max_m"]) for r in rows], label="max m")
axes[1].set_xlabel("t")
axes[1].set_ylabel("mussel range")
axes[1].legend()
fig.tight_layout()
fig.savefig(op.join(here, "timeseries.png"), dpi=150)
print("wrote timeseries.png")
"""


def _cmd_simulate(cfg: RunConfig) -> int:
    p = cfg.params
    opts = cfg.options
    t_end = float(opts.get("t_end", 600.0))
    dt = float(opts.get("dt", 0.01))
    transient = float(opts.get("transient_fraction", 0.5))
    if bool(opts.get("ode", False)):
        if "m0" in opts and "a0" in opts:
            m0, a0 = float(opts["m0"]), float(opts["a0"])
        else:
            eq = positive_equilibrium(p)
            m0 = float(opts.get("m0", eq.m * 1.05))
            a0 = float(opts.get("a0", eq.a))
        traj = simulate_ode(p, m0, a0, t_end=t_end, dt=dt)
        grid = None
    else:
        grid = Grid(int(opts.get("grid_n", 128)), p.l)
        history = _history_factory(p, float(opts.get("amplitude", 0.1)),
                                   int(opts.get("wavenumber", 2)))
        traj = simulate_pde(p, history, grid, t_end=t_end, dt=dt)
    summary = detect_orbit(traj, transient)

    ts_rows = []
    for k, t in enumerate(traj.times):
        m_frame = traj.fields_m[k]
        a_frame = traj.fields_a[k]
        if grid is not None:
            energy = lyapunov_value(m_frame, a_frame, p, grid)
        else:
            a_val = float(a_frame[0])
            energy = (p.gamma * p.r * (a_val - 1.0 - math.log(a_val))
                      + float(m_frame[0])) if a_val > 0 else math.nan
        ts_rows.append([float(t), float(m_frame.mean()),
                        float(a_frame.mean()), float(m_frame.min()),
                        float(m_frame.max()), energy])
    _write_csv(cfg.out_dir, "timeseries.csv",
               ["t", "mean_m", "mean_a", "min_m", "max_m", "energy"],
               ts_rows)

    frame_stride = max(1, len(traj.times) // 200)
    field_rows = []
    xs = grid.x() if grid is not None else np.zeros(1)
    for k in range(0, len(traj.times), frame_stride):
        t = float(traj.times[k])
        for j, x in enumerate(xs):
            field_rows.append([t, float(x), float(traj.fields_m[k][j]),
                               float(traj.fields_a[k][j])])
    _write_csv(cfg.out_dir, "fields.csv", ["t", "x", "m", "a"], field_rows)

    _write_json(cfg.out_dir, "orbit_summary.json", {
        "is_periodic": summary.is_periodic, "period": summary.period,
        "amplitude_m": list(summary.amplitude_m),
        "amplitude_a": list(summary.amplitude_a),
        "spatial_inhomogeneity": summary.spatial_inhomogeneity,
        "dt": traj.dt, "t_end": t_end})
    _write_text(cfg.out_dir, "plot_timeseries.py", _PLOT_SCRIPT)
    verdict = (f"periodic, period {_fmt(summary.period)}"
               if summary.is_periodic else "not periodic")
    print(f"run finished: {verdict}")
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig) -> int:
    p = cfg.params
    opts = cfg.options
    r_min = float(opts.get("r_min", 1.05))
    r_max = float(opts.get("r_max", 1.8))
    r_steps = int(opts.get("r_steps", 31))
    t_end = float(opts.get("t_end", 1200.0))
    dt = float(opts.get("dt", 0.01))
    transient = float(opts.get("transient_fraction", 0.6))
    rs = [float(v) for v in np.linspace(r_min, r_max, r_steps)]
    table = amplitude_sweep(p, rs, t_end=t_end, dt=dt,
                            transient_fraction=transient)
    rows = []
    oscillating = []
    for pt in table:
        if pt.summary is None:
            rows.append([pt.r, "error", "", "", "", pt.error or ""])
            continue
        s = pt.summary
        rows.append([pt.r, "yes" if s.is_periodic else "no",
                     _fmt(s.period) if s.period else "",
                     s.amplitude_m[0], s.amplitude_m[1], ""])
        if s.is_periodic:
            oscillating.append(pt.r)
    _write_csv(cfg.out_dir, "sweep.csv",
               ["r", "periodic", "period", "m_min", "m_max", "error"], rows)
    window = ([min(oscillating), max(oscillating)] if oscillating else None)
    _write_json(cfg.out_dir, "sweep_report.json", {
        "r_range": [r_min, r_max], "r_steps": r_steps,
        "oscillation_window": window})
    if window:
        print(f"sustained oscillation for r in "
              f"[{_fmt(window[0])}, {_fmt(window[1])}]")
    else:
        print("no sustained oscillation found in the swept range")
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    p = cfg.params
    opts = cfg.options
    spectrum_n = int(opts.get("spectrum_n", 200))
    draws = int(opts.get("draws", 25))
    checks: list[tuple[str, bool, str]] = []

    rng = np.random.default_rng(20260816)
    worst = 0.0
    for _ in range(draws):
        alpha = float(rng.uniform(0.05, 0.9))
        r = float(rng.uniform(1.0 + 0.05, 1.0 / alpha - 1e-6))
        q = ModelParams(r=r, alpha=alpha, gamma=float(rng.uniform(0.1, 5.0)),
                        d=float(rng.uniform(0.01, 2.0)))
        for n in range(0, 6):
            free = linear_mod.char_coeffs_no_delay(q, n)
            lag = delay_mod.delay_char_coeffs(q, n)
            worst = max(worst,
                        abs(lag.t_n + lag.b - free.t_tilde),
                        abs(lag.d_n + lag.m_n - free.d_tilde))
    checks.append(("delay_free_consistency", worst < 1e-10,
                   f"max identity residual {worst:.3e}"))

    grid = Grid(spectrum_n, p.l)
    spectrum = verify_mod.discrete_spectrum(p, grid, 12)
    worst_rel = 0.0
    for n in range(0, 5):
        for lam in linear_mod.eigenvalues_no_delay(p, n):
            nearest = min(spectrum, key=lambda z: abs(z - lam))
            worst_rel = max(worst_rel, abs(nearest - lam) / max(abs(lam), 1e-12))
    checks.append(("discrete_spectrum_match", worst_rel < 1e-3,
                   f"worst relative mismatch {worst_rel:.3e}"))

    ts = tau_star(p)
    track = verify_mod.newton_track_root(p, ts.n0, 0.0, ts.tau * 1.3, 60)
    if track.crossing_tau is None:
        checks.append(("newton_crossing_match", False, "no crossing found"))
    else:
        gap = abs(track.crossing_tau - ts.tau)
        checks.append(("newton_crossing_match", gap < 1e-6,
                       f"|tracked - closed form| = {gap:.3e}"))

    ep = eigenpair(p, ts.n0, ts.omega, ts.tau)
    same = verify_mod.bilinear_pairing_quadrature(
        p, ep.q1, ep.q2, ep.m_norm, ep.omega, ep.tau_star, ep.n0)
    cross = verify_mod.bilinear_pairing_quadrature(
        p, ep.q1, ep.q2, ep.m_norm, ep.omega, ep.tau_star, ep.n0,
        conjugate_right=True)
    pair_err = max(abs(same - 1.0), abs(cross))
    checks.append(("pairing_quadrature", pair_err < 1e-6,
                   f"max pairing residual {pair_err:.3e}"))

    region = verify_mod.grid_classify((0.05, 0.6), (1.1, 3.0), p.d,
                                      p.gamma, resolution=12)
    mismatches = 0
    cells = 0
    for i, alpha in enumerate(region.alphas):
        for j, r in enumerate(region.rs):
            label = region.labels[i, j]
            if label in ("non-H1", "hopf"):
                continue
            cells += 1
            q = ModelParams(r=float(r), alpha=float(alpha),
                            gamma=p.gamma, d=p.d)
            verdict = turing_analysis(q, strict=False).verdict
            expected = "turing-unstable" if label == "T_b" else "stable"
            if verdict != expected:
                mismatches += 1
    checks.append(("region_map_consistency", mismatches == 0,
                   f"{mismatches} mismatching cells of {cells}"))

    rows = [[name, "pass" if ok else "FAIL", detail]
            for name, ok, detail in checks]
    _write_csv(cfg.out_dir, "verify_matrix.csv",
               ["check", "status", "detail"], rows)
    all_ok = all(ok for _, ok, _ in checks)
    for name, ok, detail in checks:
        print(f"{'pass' if ok else 'FAIL'}  {name}: {detail}")
    if not all_ok:
        raise CliError(EXIT_NUMERICAL, "verification suite found mismatches")
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "hopf-curve": _cmd_hopf_curve,
    "turing-curve": _cmd_turing_curve,
    "tau-star": _cmd_tau_star,
    "normal-form": _cmd_normal_form,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}

_OPTION_KEYS = {
    "classify": [],
    "hopf-curve": ["samples"],
    "turing-curve": ["alpha_min", "alpha_max", "resolution"],
    "tau-star": ["n_max", "j_max"],
    "normal-form": [],
    "simulate": ["grid_n", "dt", "t_end", "amplitude", "wavenumber", "ode",
                 "m0", "a0", "transient_fraction"],
    "sweep": ["r_min", "r_max", "r_steps", "t_end", "dt",
              "transient_fraction"],
    "verify": ["spectrum_n", "draws"],
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--set", action="append", default=[], metavar="K=V",
                     help="override a config entry (repeatable; dotted keys)")
    sub.add_argument("--out", default=".", help="output directory")
    for name in _PARAM_FIELDS:
        sub.add_argument(f"--{name}", dest=f"param_{name}", type=float,
                         help=f"model parameter {name}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="musselbed",
        description="Bifurcation analysis and simulation of a delayed "
                    "mussel-algae reaction-diffusion model")
    subs = parser.add_subparsers(dest="command", required=True)

    extra_flags: dict[str, list[tuple[str, type]]] = {
        "classify": [],
        "hopf-curve": [("samples", int)],
        "turing-curve": [("alpha-min", float), ("alpha-max", float),
                         ("resolution", int)],
        "tau-star": [("n-max", int), ("j-max", int)],
        "normal-form": [],
        "simulate": [("grid-n", int), ("dt", float), ("t-end", float),
                     ("amplitude", float), ("wavenumber", int),
                     ("m0", float), ("a0", float),
                     ("transient-fraction", float)],
        "sweep": [("r-min", float), ("r-max", float), ("r-steps", int),
                  ("t-end", float), ("dt", float),
                  ("transient-fraction", float)],
        "verify": [("spectrum-n", int), ("draws", int)],
    }
    helps = {
        "classify": "hypotheses, equilibria and spatial stability verdict",
        "hopf-curve": "oscillation-onset values of r at fixed alpha, gamma",
        "turing-curve": "pattern-onset curve in the (alpha, r) plane",
        "tau-star": "first critical delay and crossing table",
        "normal-form": "bifurcation direction and orbit stability at tau*",
        "simulate": "integrate the spatial system or its ODE reduction",
        "sweep": "amplitude sweep across a recruitment range",
        "verify": "run the independent-oracle consistency suite",
    }
    for cmd, flags in extra_flags.items():
        sub = subs.add_parser(cmd, help=helps[cmd])
        _add_common(sub)
        for flag, kind in flags:
            sub.add_argument(f"--{flag}", dest=flag.replace("-", "_"),
                             type=kind)
        if cmd == "simulate":
            sub.add_argument("--ode", action="store_true", default=None,
                             help="integrate the spatially homogeneous "
                                  "reduction instead of the PDE")
    return parser


def run(cfg: RunConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    try:
        return _COMMANDS[cfg.command](cfg)
    except CliError:
        raise
    except HypothesisError as exc:
        raise CliError(EXIT_HYPOTHESIS, str(exc)) from exc
    except NumericalError as exc:
        raise CliError(EXIT_NUMERICAL, str(exc)) from exc
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


def main(argv: Optional[list[str]] = None) -> int:
    threads = os.environ.get(_THREAD_ENV)
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config: dict[str, Any] = {}
        if args.config:
            config = _load_config(args.config)
        for assignment in args.set:
            _apply_set(config, assignment)
        params = _build_params(config, args)
        options: dict[str, Any] = {}
        for key in _OPTION_KEYS[args.command]:
            value = _opt(config, args, key, lambda v: v, None)
            if value is not None:
                options[key] = value
        cfg = RunConfig(command=args.command, params=params,
                        options=options, out_dir=args.out)
        return run(cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
