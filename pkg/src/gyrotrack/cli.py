"""Command-line front end.

Subcommands:

* ``simulate <config> -o <csv>``   run the tracking loop, write telemetry
  CSV plus a JSON metadata sidecar
* ``tune-gains <config> [--synthesize]``   evaluate (or synthesize) gains
  against the certification inequalities
* ``compare <config> -o <dir>``    effort comparison against the
  integral-free baseline
* ``plot <csv> -o <svg> [--entries ...]``  render attitude-entry overlays,
  error decay and effort norms as static SVG files
* ``check <config>``               validate a config and exit

Exit codes: 0 success, 1 usage or config error, 2 numerical divergence.

The CSV schema is a stable contract (see COLUMNS): one row per sample,
numbers with 17 significant digits, comma separated, LF line endings.
The environment variable GYROTRACK_SEED is reserved and currently unused;
all dynamics are deterministic, and reruns produce byte-identical files.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import load_config, serialize_config
from .control import (gain_feasible, lambda_sup_formula, mu_hess_formula,
                      q_matrix, synthesize_gains)
from .errors import (ConfigParseError, DivergedStateError, GyrotrackError,
                     SchemaMismatchError)
from .scenario import compare_efforts, resolve_reference, run_closed_loop
from .svgplot import Panel, Series, write_svg

COLUMNS = (
    ["t"]
    + [f"R{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    + [f"Rd{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    + [f"Omega{k}" for k in (1, 2, 3)]
    + [f"OmegaR{k}" for k in (1, 2, 3)]
    + [f"Theta{k}" for k in (1, 2, 3)]
    + [f"uint{k}" for k in (1, 2, 3)]
    + ["psi_E", "geo_err", "E_cl", "momentum_drift"]
)

_REFERENCE_COLOR = "#d62728"   # reference drawn in red
_PLANT_COLOR = "#1f77b4"       # controlled trajectory in blue


def _write_csv(path, table):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        np.savetxt(fh, table, fmt="%.17g", delimiter=",", newline="\n")


def _feasibility_json(verdict):
    return {
        "feasible": bool(verdict.feasible),
        "kp_floor": verdict.kp_floor,
        "ki_bound": verdict.ki_bound,
        "kp_floor_any_kappa": verdict.kp_floor_any_kappa,
        "checks": {name: {"lhs": float(lhs), "rhs": float(rhs), "ok": bool(ok)}
                   for name, (lhs, rhs, ok) in verdict.checks.items()},
    }


def _metadata(cfg, traj, metrics):
    g = cfg.gains
    i_plant = cfg.plant.params.body_inertia
    return {
        "schema": {"columns": COLUMNS, "version": 1},
        "samples": len(traj),
        "gains": {"kp": g.kp, "kd": g.kd, "ki": g.ki, "kappa": g.kappa,
                  "sigma": g.sigma, "alpha": g.alpha, "beta": g.beta,
                  "tau": g.tau, "delta": g.delta, "mu_hess": g.mu_hess,
                  "lambda_sup": g.lambda_sup,
                  "mu_hess_formula": mu_hess_formula(i_plant),
                  "lambda_sup_formula": lambda_sup_formula(i_plant)},
        "feasibility": _feasibility_json(metrics.feasibility),
        "conservation": {"momentum_drift": metrics.momentum_drift,
                         "orthogonality_drift": metrics.ortho_drift},
        "tracking": {"psi_final": float(metrics.psi_e[-1]),
                     "geo_err_final": float(metrics.geo_err[-1]),
                     "psi_max": float(metrics.psi_e.max())},
        "integrator": {"scheme": cfg.integrator.scheme,
                       "step": cfg.integrator.step,
                       "duration": cfg.integrator.duration,
                       "reproject": cfg.integrator.reproject},
        "config": serialize_config(cfg),
    }


def cmd_simulate(config_path, out_path):
    """Run the closed loop and write telemetry CSV + JSON sidecar."""
    try:
        cfg = load_config(config_path)
    except (OSError, ConfigParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        traj, metrics = run_closed_loop(cfg)
    except DivergedStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    table = np.column_stack([
        traj.times,
        traj.R.reshape(len(traj), 9),
        traj.R_d.reshape(len(traj), 9),
        traj.Omega, traj.OmegaR,
        np.mod(traj.Theta, 2.0 * np.pi),
        traj.u_int,
        metrics.psi_e, metrics.geo_err, metrics.ecl,
        metrics.momentum_drift_series,
    ])
    out = Path(out_path)
    _write_csv(out, table)
    with open(out.with_suffix(".meta.json"), "w", encoding="utf-8") as fh:
        json.dump(_metadata(cfg, traj, metrics), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out} ({len(traj)} rows) and {out.with_suffix('.meta.json')}")
    return 0


def _print_gain_report(gains, i_plant):
    verdict = gain_feasible(gains)
    q = q_matrix(gains)
    minors = (q[0, 0], np.linalg.det(q[:2, :2]), np.linalg.det(q))
    print(f"gains: kp={gains.kp:.6g} kd={gains.kd:.6g} ki={gains.ki:.6g} "
          f"kappa={gains.kappa:.6g}")
    print(f"derived: alpha={gains.alpha:.6g} beta={gains.beta:.6g} "
          f"tau={gains.tau:.6g} delta={gains.delta:.6g} sigma={gains.sigma:.6g}")
    print(f"bounds: mu_hess={gains.mu_hess:.6g} (eigenvalue formula gives "
          f"{mu_hess_formula(i_plant):.6g}), lambda_sup={gains.lambda_sup:.6g} "
          f"(formula gives {lambda_sup_formula(i_plant):.6g})")
    print("Q matrix:")
    for row in q:
        print("   [" + "  ".join(f"{x: .6g}" for x in row) + "]")
    print(f"principal minors: {minors[0]:.6g}, {minors[1]:.6g}, {minors[2]:.6g}")
    print(f"kp floor: {verdict.kp_floor:.6g} "
          f"(over all admissible kappa: >= {verdict.kp_floor_any_kappa:.6g})")
    print(f"ki bound: {verdict.ki_bound:.6g}")
    for name, (lhs, rhs, ok) in verdict.checks.items():
        print(f"  {name}: {lhs:.6g} vs {rhs:.6g} -> {'ok' if ok else 'FAIL'}")
    print(f"verdict: {'feasible' if verdict.feasible else 'infeasible'}")
    return verdict


def cmd_tune_gains(config_path, synthesize=False):
    """Report the certification inequalities; optionally synthesize gains."""
    try:
        cfg = load_config(config_path)
    except (OSError, ConfigParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    i_plant = cfg.plant.params.body_inertia
    print("== configured gains ==")
    _print_gain_report(cfg.gains, i_plant)
    if synthesize:
        print("== synthesized gains ==")
        gains = synthesize_gains(i_plant, kd=cfg.gains.kd)
        verdict = _print_gain_report(gains, i_plant)
        if not verdict.feasible:   # pragma: no cover - construction guarantees
            print("error: synthesis failed to certify", file=sys.stderr)
            return 1
    return 0


def cmd_compare(config_path, out_dir):
    """Run proposed vs integral-free baseline; write effort CSVs + summary."""
    try:
        cfg = load_config(config_path)
    except (OSError, ConfigParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = Path(out_dir)
    if not out.exists():
        if not out.parent.exists():
            print(f"error: parent directory {out.parent} does not exist",
                  file=sys.stderr)
            return 1
        out.mkdir()
    try:
        cmp_result = compare_efforts(cfg)
    except DivergedStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    header = "t,uint_norm,uext_norm"
    for name, metrics in (("proposed", cmp_result.proposed),
                          ("baseline", cmp_result.baseline)):
        path = out / f"effort_{name}.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            np.savetxt(fh, np.column_stack([cmp_result.times,
                                            metrics.effort_l2,
                                            metrics.effort_uext_l2]),
                       fmt="%.17g", delimiter=",", newline="\n")
    summary = {
        "proposed_integral": cmp_result.proposed_integral,
        "baseline_integral": cmp_result.baseline_integral,
        "ratio": cmp_result.proposed_integral / cmp_result.baseline_integral
        if cmp_result.baseline_integral else float("nan"),
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out}/effort_proposed.csv, {out}/effort_baseline.csv, "
          f"{out}/summary.json")
    return 0


def _load_csv(csv_path):
    data = np.genfromtxt(csv_path, delimiter=",", names=True)
    names = list(data.dtype.names or [])
    if names != COLUMNS:
        raise SchemaMismatchError(
            f"CSV columns do not match the telemetry schema ({csv_path})")
    if data.shape == ():
        data = data.reshape(1)
    if data.size == 0:
        raise SchemaMismatchError(f"CSV has no data rows ({csv_path})")
    return data


def cmd_plot(csv_path, out_svg, entries=(11, 12, 21, 22)):
    """Render attitude-entry overlays, psi decay and effort norms to SVG."""
    try:
        data = _load_csv(csv_path)
    except (OSError, SchemaMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    t = data["t"]
    panels = []
    for entry in entries:
        i, j = divmod(int(entry), 10)
        if not (1 <= i <= 3 and 1 <= j <= 3):
            print(f"error: bad matrix entry '{entry}'", file=sys.stderr)
            return 1
        panels.append(Panel(
            title=f"attitude entry ({i},{j})", xlabel="t [s]",
            ylabel=f"R{i}{j}",
            series=[Series(t, data[f"Rd{i}{j}"], "reference", _REFERENCE_COLOR),
                    Series(t, data[f"R{i}{j}"], "plant", _PLANT_COLOR)]))
    out = Path(out_svg)
    write_svg(out, panels)

    psi_out = out.with_name(out.stem + "_psi" + out.suffix)
    write_svg(psi_out, [Panel(title="navigation error", xlabel="t [s]",
                              ylabel="psi(E)",
                              series=[Series(t, data["psi_E"], "psi(E)",
                                             _PLANT_COLOR)])])
    effort = np.sqrt(data["uint1"] ** 2 + data["uint2"] ** 2
                     + data["uint3"] ** 2)
    effort_out = out.with_name(out.stem + "_effort" + out.suffix)
    write_svg(effort_out, [Panel(title="rotor torque magnitude",
                                 xlabel="t [s]", ylabel="|u_int| [N m]",
                                 series=[Series(t, effort, "|u_int|",
                                                _PLANT_COLOR)])])
    print(f"wrote {out}, {psi_out}, {effort_out}")
    return 0


def cmd_check(config_path):
    """Validate a config file and print a short summary."""
    try:
        cfg = load_config(config_path)
    except (OSError, ConfigParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = resolve_reference(cfg)
    verdict = gain_feasible(cfg.gains)
    print(f"config ok: program={cfg.program.kind}, "
          f"step={cfg.integrator.step:g} s, "
          f"duration={cfg.integrator.duration:g} s, "
          f"gains {'feasible' if verdict.feasible else 'infeasible'}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gyrotrack",
        description="Attitude tracking for a rigid body with internal "
                    "reaction rotors.",
        epilog="GYROTRACK_SEED is reserved for future use; simulations are "
               "deterministic and ignore it.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario, write telemetry CSV")
    p.add_argument("config")
    p.add_argument("-o", "--output", required=True, metavar="CSV")

    p = sub.add_parser("tune-gains", help="evaluate gain certification")
    p.add_argument("config")
    p.add_argument("--synthesize", action="store_true",
                   help="also derive a feasible gain set")

    p = sub.add_parser("compare", help="effort comparison vs PD baseline")
    p.add_argument("config")
    p.add_argument("-o", "--output", required=True, metavar="DIR")

    p = sub.add_parser("plot", help="render telemetry CSV to SVG files")
    p.add_argument("csv")
    p.add_argument("-o", "--output", required=True, metavar="SVG")
    p.add_argument("--entries", default="11,12,21,22",
                   help="comma-separated attitude matrix entries (e.g. 11,12)")

    p = sub.add_parser("check", help="validate a scenario config")
    p.add_argument("config")
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.output)
        if args.command == "tune-gains":
            return cmd_tune_gains(args.config, synthesize=args.synthesize)
        if args.command == "compare":
            return cmd_compare(args.config, args.output)
        if args.command == "plot":
            try:
                entries = tuple(int(e) for e in args.entries.split(","))
            except ValueError:
                print(f"error: bad --entries '{args.entries}'", file=sys.stderr)
                return 1
            return cmd_plot(args.csv, args.output, entries)
        if args.command == "check":
            return cmd_check(args.config)
    except GyrotrackError as exc:   # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
