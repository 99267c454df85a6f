"""Scenario-driven command line: expand, propagate, gauge, reproduce-all.

Each command reads a flat key-value scenario file, writes CSV artifacts, a
plot, and a manifest with checksums into the output directory, and returns a
contract exit code: 0 success, 1 configuration error, 2 numerical
non-convergence, 3 physical-consistency failure. reproduce-all runs the
bundled claim scenarios and compares fresh results against the golden tables
(override their location with EXPANSIONLAB_GOLDEN_DIR).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, basis, expansion, gauge, propagation, svgplot
from .basis import Box1D, BoxIndex, LandauIndex, LandauUniformField, SpacePoint
from .gauge import (GaugeFieldMismatchError, GaugeFunction, GaugeJumpScenario,
                    PhaseFitScenario, zero_gauge_function)
from .propagation import Units
from .scenario import RunManifest, Scenario, ScenarioError, load_scenario
from .specfun import (QuadratureError, QuadratureSpec, SeriesDivergenceError,
                      integrate_interval)


def _golden_dir() -> Path:
    env = os.environ.get("EXPANSIONLAB_GOLDEN_DIR")
    if env:
        return Path(env)
    return Path(resources.files("expansionlab") / "data" / "golden")


def _bundled_scenario_dir() -> Path:
    return Path(resources.files("expansionlab") / "data" / "scenarios")


def _load_golden(name: str) -> dict:
    path = _golden_dir() / name
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _write_text(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _manifest(scn: Scenario, command: str, tolerance_scale: float,
              seed, out_dir: Path, outputs):
    man = RunManifest(scn.sha256(), __version__, command, tolerance_scale, seed)
    for p in outputs:
        man.add_output(p)
    man.write(out_dir / "manifest.json")


# ---------------------------------------------------------------- expand

def _expand_landau(scn: Scenario, out_dir: Path, scale: float):
    a = scn.get_float("magnetic_length", 1.0)
    n_max = scn.get_int("n_max", 200)
    quad_max = scn.get_int("quad_check_max", 20)
    family = LandauUniformField(a)
    spec = QuadratureSpec(upper_cutoff=40.0 * a).scaled(scale)

    closed = [expansion.landau_plane_wave_coefficient(n, a)
              for n in range(n_max + 1)]
    quad_vals, quad_errs, flags = [], [], []
    for n in range(quad_max + 1):
        try:
            v, e = expansion.landau_plane_wave_overlap(n, a, spec)
            quad_vals.append(v)
            quad_errs.append(e)
            flags.append("")
        except QuadratureError as exc:
            quad_vals.append(exc.best_estimate)
            quad_errs.append(exc.error_estimate)
            flags.append(expansion.FLAG_NO_CONVERGENCE)

    report = expansion.convergence_scan(
        lambda n: expansion.landau_plane_wave_coefficient(n, a), n_max)
    series = expansion.CoefficientSeries(
        family, [(LandauIndex(n), complex(c)) for n, c in enumerate(closed)])
    csv_path = out_dir / "coefficients.csv"
    expansion.write_coefficient_csv(series, csv_path)

    lines = [f"scenario: {scn.name}", "",
             "closed-form route vs quadrature route (l=0 radial overlap):",
             "n,closed,quadrature,err_estimate,abs_diff,ok"]
    worst_diff = 0.0
    for n in range(quad_max + 1):
        diff = abs(closed[n] - quad_vals[n])
        tol = 10.0 * quad_errs[n] + 1e-12
        ok = diff <= tol and flags[n] == ""
        worst_diff = max(worst_diff, diff)
        lines.append(f"{n},{closed[n]!r},{quad_vals[n]!r},{quad_errs[n]!r},"
                     f"{diff!r},{'yes' if ok else 'NO'}")
    ratios = [abs(quad_vals[n + 1]) / abs(quad_vals[n])
              for n in range(quad_max)]
    ratio_defect = max(abs(r - 1.0) for r in ratios)
    lines += ["",
              f"magnitude ratio defect max |.|C(n+1)|/|C(n)| - 1| = "
              f"{ratio_defect!r}",
              "", report.to_text()]
    report_path = out_dir / "convergence_report.txt"
    _write_text(report_path, "\n".join(lines))

    svg_path = out_dir / "partial_sums.svg"
    svgplot.line_chart(svg_path, "partial sums of |C_n|^2", "N",
                       "sum_{n<=N} |C_n|^2",
                       [("partial sums", report.ns, report.partial_sums)])
    code = 2 if any(f for f in flags) else 0
    stats = {
        "kind": "expand-landau",
        "a": a,
        "closed": closed[:quad_max + 1],
        "quad": quad_vals,
        "quad_err": quad_errs,
        "ratio_defect": ratio_defect,
        "worst_route_diff": worst_diff,
        "verdict": report.verdict,
        "slope": report.slope,
    }
    return code, stats, [csv_path, report_path, svg_path]


def _expand_box(scn: Scenario, out_dir: Path, scale: float):
    width = scn.get_float("width", 1.0)
    n_max = scn.get_int("n_max", 50)
    target_kind = scn.get_str("target", choices={"eigenstate", "gaussian"})
    family = Box1D(width)
    spec = QuadratureSpec().scaled(scale)

    if target_kind == "eigenstate":
        n0 = scn.get_int("target_n", 1)

        def target(p: SpacePoint):
            return complex(basis.box_eigenfunction(n0, p.x, width))
    else:
        sigma = scn.get_float("sigma", width / 10.0)
        center = scn.get_float("center", width / 2.0)
        raw = lambda x: math.exp(-0.5 * ((x - center) / sigma) ** 2)
        nrm_sq, _ = integrate_interval(lambda x: raw(x) ** 2, 0.0, width, spec)
        const = 1.0 / math.sqrt(nrm_sq)

        def target(p: SpacePoint):
            return complex(const * raw(p.x))

    indices = [BoxIndex(n) for n in range(1, n_max + 1)]
    series = expansion.project(target, family, indices, spec)
    defect = expansion.parseval_defect(series)
    coef = {n: c for n, c in zip(series.principal_numbers(),
                                 series.coefficients())}
    report = expansion.convergence_scan(lambda n: coef[n], n_max, n_start=1)

    xs = np.linspace(0.0, width, 201)
    round_trip = max(abs(expansion.reconstruct(series, SpacePoint.cartesian(x))
                         - target(SpacePoint.cartesian(x))) for x in xs)

    csv_path = out_dir / "coefficients.csv"
    expansion.write_coefficient_csv(series, csv_path)
    report_path = out_dir / "convergence_report.txt"
    _write_text(report_path, "\n".join([
        f"scenario: {scn.name}",
        f"parseval defect at N={n_max}: {defect!r}",
        f"max pointwise round-trip error (201-point grid): {round_trip!r}",
        "", report.to_text()]))
    svg_path = out_dir / "partial_sums.svg"
    svgplot.line_chart(svg_path, "partial sums of |C_n|^2", "N",
                       "sum_{n<=N} |C_n|^2",
                       [("partial sums", report.ns, report.partial_sums)])
    code = 2 if series.flagged() else 0
    stats = {
        "kind": "expand-box",
        "parseval_defect": defect,
        "round_trip": float(round_trip),
        "verdict": report.verdict,
    }
    return code, stats, [csv_path, report_path, svg_path]


def cmd_expand(scn: Scenario, out_dir: Path, tolerance_scale: float = 1.0):
    family = scn.get_str("family", choices={"landau", "box"})
    out_dir.mkdir(parents=True, exist_ok=True)
    if family == "landau":
        code, stats, outputs = _expand_landau(scn, out_dir, tolerance_scale)
    else:
        code, stats, outputs = _expand_box(scn, out_dir, tolerance_scale)
    _manifest(scn, "expand", tolerance_scale, None, out_dir, outputs)
    return code, stats


# ------------------------------------------------------------- propagate

def _model_from_scenario(scn: Scenario, seed=None, units=Units()):
    width = scn.get_float("well_width", 1.0)
    n_basis = scn.get_int("n_basis", 32)
    kind = scn.get_str("perturbation",
                       choices={"none", "dipole-ramp", "dipole-step",
                                "random-hermitian"})
    t_end = scn.get_float("t_end", 1.0)
    t_start = scn.get_float("t_start", 0.0)
    window = (t_start, t_end)
    energies = propagation.box_energies(width, n_basis, units)
    if kind == "none":
        return propagation.HamiltonianModel(energies, [], window)
    amplitude = scn.get_float("amplitude", 1.0)
    if kind == "random-hermitian":
        if seed is None:
            seed = scn.get_int("seed", 0)
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((n_basis, n_basis)) \
            + 1j * rng.standard_normal((n_basis, n_basis))
        h = 0.5 * (m + m.conj().T) * amplitude
        return propagation.HamiltonianModel(energies, [(lambda t: 1.0, h)],
                                            window)
    ramp_time = scn.get_float("ramp_time", 0.5)
    profile = "ramp" if kind == "dipole-ramp" else "step"
    return propagation.box_dipole_model(width, n_basis, amplitude, ramp_time,
                                        window, units, profile)


def cmd_propagate(scn: Scenario, out_dir: Path, tolerance_scale: float = 1.0,
                  seed=None):
    out_dir.mkdir(parents=True, exist_ok=True)
    units = Units(scn.get_float("hbar", 1.0))
    n_slices = scn.get_int("n_slices", 1000)
    tracked = scn.get_int("tracked", 8)
    s = scn.get_int("initial_index", 1)
    model = _model_from_scenario(scn, seed, units)
    if s < 1 or s > model.dim:
        raise ScenarioError(scn.origin, None,
                            f"initial_index {s} outside the basis")
    c0 = np.zeros(model.dim, dtype=complex)
    c0[s - 1] = 1.0

    euler = propagation.euler_propagate(c0, model, n_slices, units)
    cayley = propagation.unitary_propagate(c0, model, n_slices, units)
    audit = propagation.norm_audit(euler, model, units)

    # refinement study: mean per-step growth should scale like dt^2
    exponents = []
    growth = []
    for k in (1, 2, 4):
        traj = euler if k == 1 else propagation.euler_propagate(
            c0, model, n_slices * k, units)
        growth.append((traj.norms[-1] - 1.0) / (n_slices * k))
    for g1, g2 in zip(growth, growth[1:]):
        exponents.append(math.log2(g1 / g2) if g2 > 0.0 else float("nan"))

    euler_csv = out_dir / "euler_trajectory.csv"
    cayley_csv = out_dir / "unitary_trajectory.csv"
    propagation.write_trajectory_csv(euler, euler_csv, tracked)
    propagation.write_trajectory_csv(cayley, cayley_csv, tracked)
    audit_path = out_dir / "norm_audit.txt"
    _write_text(audit_path, audit.to_text())
    svg_path = out_dir / "norms.svg"
    svgplot.line_chart(svg_path, "norm audit: first-order slicing vs Cayley",
                       "t", "sum_k |C_k|^2",
                       [("first-order", euler.times, euler.norms),
                        ("cayley", cayley.times, cayley.norms)])
    outputs = [euler_csv, cayley_csv, audit_path, svg_path]
    _manifest(scn, "propagate", tolerance_scale, seed, out_dir, outputs)

    stats = {
        "kind": "propagate",
        "euler_final_norm": float(euler.norms[-1]),
        "cayley_max_dev": float(np.max(np.abs(cayley.norms - 1.0))),
        "monotone": audit.monotone,
        "first_strict_step": audit.first_strict_step,
        "closed_form_defect": audit.closed_form_defect,
        "audit_passed": audit.passed,
        "growth_exponents": exponents,
        "n_slices": n_slices,
    }
    return (0 if audit.passed else 3), stats


# ----------------------------------------------------------------- gauge

def _gauge_jump_scenario(scn: Scenario) -> GaugeJumpScenario:
    return GaugeJumpScenario(
        width=scn.get_float("well_width", 1.0),
        n_basis=scn.get_int("n_basis", 24),
        initial_index=scn.get_int("initial_index", 1),
        amplitude=scn.get_float("amplitude", 0.2),
        switch=scn.get_str("switch", "step", choices={"step", "ramp"}),
        ramp_time=scn.get_float("ramp_time", 0.5),
        t_end=scn.get_float("t_end", 2e-5),
        n_slices=scn.get_int("n_slices", 200),
        observe_stride=scn.get_int("observe_stride", 4),
        second_gauge=scn.get_str("second_gauge", "transformed",
                                 choices={"transformed", "identity",
                                          "mismatched"}),
        mismatch_factor=scn.get_float("mismatch_factor", 1.5),
        units=Units(scn.get_float("hbar", 1.0)))


def _phase_fit_inputs(scn: Scenario):
    fit = PhaseFitScenario(
        width=scn.get_float("well_width", 1.0),
        n_reference=scn.get_int("n_reference", 64),
        initial_index=scn.get_int("initial_index", 1),
        amplitude=scn.get_float("amplitude", 12.0),
        ramp_time=scn.get_float("ramp_time", 0.3),
        t_end=scn.get_float("t_end", 1.2),
        n_slices=scn.get_int("n_slices", 1200),
        fit_sizes=tuple(scn.get_int_list("fit_sizes",
                                         [2, 4, 8, 12, 16, 24, 32, 48])),
        n_grid=scn.get_int("n_grid", 1200),
        fit_stride=scn.get_int("fit_stride", 200),
        units=Units(scn.get_float("hbar", 1.0)))
    strength = scn.get_float("phase_strength", 0.8)
    tau = scn.get_float("phase_ramp_time", fit.ramp_time)
    g = GaugeFunction(
        f=lambda t, r: strength * propagation.smooth_ramp(t, tau) * r[0],
        grad_f=lambda t, r: np.array(
            [strength * propagation.smooth_ramp(t, tau), 0.0, 0.0]),
        dt_f=lambda t, r: strength * propagation.smooth_ramp_dt(t, tau) * r[0])
    return fit, g


def cmd_gauge(scn: Scenario, out_dir: Path, tolerance_scale: float = 1.0):
    out_dir.mkdir(parents=True, exist_ok=True)
    experiment = scn.get_str("experiment", choices={"jump", "phase-fit"})
    if experiment == "jump":
        jump_scn = _gauge_jump_scenario(scn)
        result = gauge.gauge_jump_experiment(jump_scn)
        csv_path = out_dir / "observables.csv"
        gauge.write_observable_csv(csv_path,
                                   [result.report_gauge1, result.report_gauge2])
        summary_path = out_dir / "summary.txt"
        _write_text(summary_path, result.summary_text())
        svg_path = out_dir / "velocity.svg"
        t = result.report_gauge1.times
        svgplot.line_chart(svg_path, "velocity expectation across the gauge pair",
                           "t", "<v_x>",
                           [("gauge 1", t, result.report_gauge1.v_series[:, 0]),
                            ("gauge 2 (co-transformed)", t,
                             result.report_gauge2.v_series[:, 0])])
        outputs = [csv_path, summary_path, svg_path]
        _manifest(scn, "gauge", tolerance_scale, None, out_dir, outputs)
        stats = {
            "kind": "gauge-jump",
            "amplitude": jump_scn.amplitude,
            "jump_metric": result.report_gauge1.jump_metric,
            "jump_metric_gauge2": result.report_gauge2.jump_metric,
            "max_naive_discrepancy": float(np.max(result.naive_discrepancy)),
            "max_covariant_discrepancy":
                float(np.max(result.covariant_discrepancy)),
            "field_defect": result.field_defect,
        }
        return 0, stats

    fit_scn, g = _phase_fit_inputs(scn)
    report = gauge.phase_factored_expansion_test(fit_scn, g)
    control_scn = PhaseFitScenario(
        width=fit_scn.width, n_reference=fit_scn.n_reference,
        initial_index=fit_scn.initial_index, amplitude=0.0,
        ramp_time=fit_scn.ramp_time, t_end=fit_scn.t_end,
        n_slices=fit_scn.n_slices, fit_sizes=fit_scn.fit_sizes,
        n_grid=fit_scn.n_grid, fit_stride=fit_scn.fit_stride,
        units=fit_scn.units)
    control = gauge.phase_factored_expansion_test(control_scn,
                                                  zero_gauge_function())
    control_max = float(np.max(control.residuals))

    csv_path = out_dir / "residuals.csv"
    report.write_csv(csv_path)
    summary_path = out_dir / "summary.txt"
    _write_text(summary_path, "\n".join([
        report.to_text(),
        f"stationary control max residual: {control_max!r}"]))
    svg_path = out_dir / "residuals.svg"
    svgplot.line_chart(svg_path, "phase-factored fit residual vs basis size",
                       "basis size", "log10 residual",
                       [("final time", list(report.fit_sizes),
                         list(report.final_residuals()))], log_y=True)
    outputs = [csv_path, summary_path, svg_path]
    _manifest(scn, "gauge", tolerance_scale, None, out_dir, outputs)
    stats = {
        "kind": "gauge-phase-fit",
        "fit_sizes": list(report.fit_sizes),
        "final_residuals": [float(r) for r in report.final_residuals()],
        "control_max_residual": control_max,
        "plateaued": report.plateaued,
    }
    return 0, stats


# ---------------------------------------------------------- reproduce-all

def _dispatch(scn: Scenario, out_dir: Path, tolerance_scale: float, seed=None):
    if scn.kind == "expand":
        return cmd_expand(scn, out_dir, tolerance_scale)
    if scn.kind == "propagate":
        return cmd_propagate(scn, out_dir, tolerance_scale, seed)
    return cmd_gauge(scn, out_dir, tolerance_scale)


def _check_magnitude_recurrence(stats, golden, scn):
    fresh = stats["quad"]
    frozen = golden["quad"]
    freeze_dev = max(abs(f - z) for f, z in zip(fresh, frozen))
    ok = (stats["ratio_defect"] <= golden["magnitude_tol"]
          and freeze_dev <= golden["freeze_tol"]
          and stats["worst_route_diff"] <= golden["route_tol"])
    return ok, (f"ratio defect {stats['ratio_defect']:.3e}, "
                f"golden deviation {freeze_dev:.3e}, "
                f"route split {stats['worst_route_diff']:.3e}")


def _check_divergence(stats, golden, scn):
    slope_ok = abs(stats["slope"] - golden["slope"]) \
        <= golden["slope_rtol"] * golden["slope"]
    ok = stats["verdict"] == golden["verdict"] and slope_ok
    return ok, (f"verdict {stats['verdict']}, slope {stats['slope']:.6f} "
                f"(expected {golden['slope']:.6f})")


def _check_euler_growth(stats, golden, scn):
    rel = abs(stats["euler_final_norm"] - golden["final_norm_sq"]) \
        / golden["final_norm_sq"]
    expo_ok = all(golden["exponent_range"][0] <= e <= golden["exponent_range"][1]
                  for e in stats["growth_exponents"])
    ok = (rel <= golden["final_norm_rtol"] and stats["monotone"]
          and stats["first_strict_step"] == golden["first_strict_step"]
          and stats["audit_passed"] and expo_ok)
    return ok, (f"final norm dev {rel:.3e}, first strict step "
                f"{stats['first_strict_step']}, exponents "
                f"{[round(e, 4) for e in stats['growth_exponents']]}")


def _check_unitary_contrast(stats, golden, scn):
    units = Units(scn.get_float("hbar", 1.0))
    model = _model_from_scenario(scn, units=units)
    s = scn.get_int("initial_index", 1)
    c0 = np.zeros(model.dim, dtype=complex)
    c0[s - 1] = 1.0
    traj = propagation.unitary_propagate(c0, model, golden["n_steps"], units)
    dev = float(np.max(np.abs(traj.norms - 1.0)))
    return dev < golden["max_norm_dev"], \
        f"max |norm^2 - 1| = {dev:.3e} over {golden['n_steps']} steps"


def _check_velocity_jump(stats, golden, scn):
    jump_dev = abs(stats["jump_metric"] - golden["amplitude"])
    ok = (jump_dev <= golden["jump_tol"]
          and stats["max_covariant_discrepancy"] <= golden["covariant_tol"])
    return ok, (f"|jump - A0| = {jump_dev:.3e}, covariant discrepancy "
                f"{stats['max_covariant_discrepancy']:.3e}")


def _check_phase_fit(stats, golden, scn):
    if stats["fit_sizes"] != golden["fit_sizes"]:
        return False, "fit sizes differ from golden"
    dev = max(abs(f - z) for f, z in zip(stats["final_residuals"],
                                         golden["residuals"]))
    ok = dev <= golden["curve_tol"] \
        and stats["control_max_residual"] <= golden["stationary_tol"]
    return ok, (f"curve deviation {dev:.3e}, control residual "
                f"{stats['control_max_residual']:.3e}")


_CHECKERS = {
    "equal-magnitude-recurrence": _check_magnitude_recurrence,
    "series-divergence": _check_divergence,
    "euler-norm-growth": _check_euler_growth,
    "unitary-contrast": _check_unitary_contrast,
    "velocity-jump": _check_velocity_jump,
    "phase-factored-fit": _check_phase_fit,
}


def cmd_reproduce_all(scenario_dir: Path, out_root: Path,
                      tolerance_scale: float = 1.0) -> int:
    scn_files = sorted(scenario_dir.glob("*.scn"))
    if not scn_files:
        print(f"error: no scenario files in {scenario_dir}", file=sys.stderr)
        return 1
    claims = _load_golden("claims.json")["claims"]
    by_name = {p.name: p for p in scn_files}
    needed = []
    for claim in claims:
        if claim["scenario"] not in by_name:
            print(f"error: claim '{claim['id']}' needs scenario "
                  f"{claim['scenario']}, not found in {scenario_dir}",
                  file=sys.stderr)
            return 1
        if claim["scenario"] not in needed:
            needed.append(claim["scenario"])

    results = {}

    def run(name):
        scn = load_scenario(by_name[name])
        out_dir = out_root / Path(name).stem
        return name, _dispatch(scn, out_dir, tolerance_scale)

    with ThreadPoolExecutor(max_workers=min(2, len(needed))) as pool:
        for name, (code, stats) in pool.map(run, needed):
            results[name] = (code, stats)

    all_ok = True
    rows = []
    for claim in claims:
        code, stats = results[claim["scenario"]]
        golden = _load_golden(claim["golden"])
        scn = load_scenario(by_name[claim["scenario"]])
        ok, detail = _CHECKERS[claim["id"]](stats, golden, scn)
        if code != 0:
            ok = False
            detail += f" (scenario exit {code})"
        all_ok = all_ok and ok
        rows.append((claim["id"], claim["scenario"],
                     "PASS" if ok else "FAIL", detail))

    id_w = max(len(r[0]) for r in rows)
    scn_w = max(len(r[1]) for r in rows)
    print(f"{'claim':<{id_w}}  {'scenario':<{scn_w}}  result  detail")
    for cid, sname, verdict, detail in rows:
        print(f"{cid:<{id_w}}  {sname:<{scn_w}}  {verdict:<6}  {detail}")
    return 0 if all_ok else 3


# ------------------------------------------------------------------ main

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expansionlab",
        description="eigenfunction-expansion audit bench")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("expand", "propagate", "gauge"):
        p = sub.add_parser(name, help=f"run a {name} scenario")
        p.add_argument("--scenario", required=True, help="scenario file path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--tolerance-scale", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=None)
    p = sub.add_parser("reproduce-all",
                       help="run every bundled claim scenario against goldens")
    p.add_argument("--scenario-dir", default=None,
                   help="directory of .scn files (default: bundled)")
    p.add_argument("--out", default="reproduce-out", help="output root")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "reproduce-all":
            scenario_dir = Path(args.scenario_dir) if args.scenario_dir \
                else _bundled_scenario_dir()
            return cmd_reproduce_all(scenario_dir, Path(args.out),
                                     args.tolerance_scale)
        scn = load_scenario(args.scenario)
        out_dir = Path(args.out)
        if args.command == "expand":
            code, _ = cmd_expand(scn, out_dir, args.tolerance_scale)
        elif args.command == "propagate":
            code, _ = cmd_propagate(scn, out_dir, args.tolerance_scale,
                                    args.seed)
        else:
            code, _ = cmd_gauge(scn, out_dir, args.tolerance_scale)
        return code
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, SeriesDivergenceError) as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return 2
    except GaugeFieldMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"field-difference norm: {exc.defect!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
