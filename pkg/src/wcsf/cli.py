"""Command line front end.

    wcsf run <config>        flow one scenario, write its artifacts
    wcsf verify <config>     same, with every verification pass forced on
    wcsf suite <directory>   run all *.cfg files and write a summary

Exit codes: 0 clean, 1 a monitored bound or residual check failed,
2 the curve stopped being a graph, 3 curvature blew up, 64 usage or
config errors. Wall-clock timing is printed to stdout only and never
written into artifact files, which are byte-reproducible.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import verification
from .artifacts import write_report, write_svg, write_trajectory_csv
from .flow import StopReason, run
from .geometry import RIGHT
from .scenario import ConfigError, Scenario, parse_config

__all__ = ["main", "execute_scenario",
           "EXIT_OK", "EXIT_FALSIFIED", "EXIT_GRAPH_LOSS", "EXIT_BLOWUP",
           "EXIT_USAGE"]

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_GRAPH_LOSS = 2
EXIT_BLOWUP = 3
EXIT_USAGE = 64

_STUDY_GRIDS = (64, 128, 256)
_STUDY_T_END = 0.12


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="wcsf",
                     description="curve shortening flows in warped products")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("config", help="path to a .cfg scenario file")
    p_run.add_argument("--out", default=None,
                       help="artifact directory (default wcsf_out/<name>)")

    p_ver = sub.add_parser("verify",
                           help="run one scenario with all checks enabled")
    p_ver.add_argument("config", help="path to a .cfg scenario file")
    p_ver.add_argument("--out", default=None,
                       help="artifact directory (default wcsf_out/<name>)")

    p_suite = sub.add_parser("suite", help="run every .cfg in a directory")
    p_suite.add_argument("directory", help="directory holding .cfg files")
    p_suite.add_argument("--out", default=None,
                         help="artifact root (default wcsf_out)")
    p_suite.add_argument("--jobs", type=int, default=1,
                         help="concurrent scenario runs (default 1)")
    return parser


def _load_scenario(path: Path) -> Scenario:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        return parse_config(text, name=path.stem)
    except ConfigError as exc:
        raise ConfigError(f"{path.name}: {exc}") from None


def _bound_section(rep) -> dict:
    section = {
        "constant_name": rep.constant_name,
        "constant_value": rep.constant_value,
        "worst_slack": rep.worst_slack,
        "passed": rep.passed,
    }
    for key, value in rep.constant_inputs.items():
        section[f"input.{key}"] = value
    if rep.notes:
        section["notes"] = rep.notes
    return section


def _study_section(rep) -> dict:
    return {
        "grids": rep.grids,
        "max_residuals": rep.max_residuals,
        "orders": rep.orders,
        "threshold": rep.threshold,
        "passed": rep.passed,
    }


def execute_scenario(scn: Scenario, out_dir) -> tuple:
    """Run one scenario, write its artifacts, return (exit_code, stop)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    traj, rep = run(scn.manifold, scn.initial_curve(), scn.flow_params())
    wall = time.perf_counter() - started

    sections = {
        "scenario": {
            "name": scn.name,
            "kind": scn.manifold.kind,
            "base_dim": scn.manifold.base_dim,
            "m": scn.m,
            "cfl": scn.cfl,
            "t_max": scn.t_max,
            "tol_geo": scn.tol_geo,
            "tol_bound": scn.tol_bound,
            "theta_floor": scn.theta_floor,
            "a_ceiling": scn.a_ceiling,
            "record_stride": scn.record_stride,
            "winding": scn.winding,
        },
        "flow": {
            "stop_reason": rep.stop_reason.value,
            "t_final": rep.t_final,
            "steps": rep.steps,
            "recorded_states": len(traj),
            "initial_min_theta": rep.initial_min_theta,
            "final_min_theta": rep.final_min_theta,
            "final_min_theta_hat": rep.final_min_theta_hat,
            "final_max_curvature": rep.final_max_a,
            "length_initial": rep.length_initial,
            "length_final": rep.length_final,
            "length_monotone": rep.length_monotone,
            "limit_base_point": rep.limit_base_point,
            "limit_warp_gradient_norm": rep.limit_warp_gradient_norm,
            "geodesic_certified": rep.geodesic_certified,
            "converging_undecided": rep.converging_undecided,
        },
    }

    bounds = []
    if scn.verify_bounds:
        exp_rep, drift_rep = verification.theta_bound_monitor(
            traj, scn.manifold, eps_tol=scn.tol_bound)
        sections["bounds"] = {"exp": _bound_section(exp_rep),
                              "drift": _bound_section(drift_rep)}
        bounds += [exp_rep, drift_rep]
    if scn.verify_dissipation:
        diss = verification.dissipation_monitor(traj, scn.manifold)
        sections["dissipation"] = _bound_section(diss)
        bounds.append(diss)

    studies = []
    if scn.verify_evolution:
        studies.append(verification.evolution_residual_study(
            scn.manifold, scn.init_field, _STUDY_GRIDS, _STUDY_T_END, scn.cfl))
        studies.append(verification.dissipation_residual_study(
            scn.manifold, scn.init_field, _STUDY_GRIDS, _STUDY_T_END, scn.cfl))
        if scn.manifold.kind == RIGHT:
            sections["power_gap"] = {
                "gradient_term_theta_vs_theta_sq":
                    verification.angle_power_gap(traj[0], scn.manifold)}
    if scn.verify_commutator:
        studies.append(verification.commutator_residual_study(
            scn.manifold, scn.init_field, _STUDY_GRIDS, _STUDY_T_END, scn.cfl))
    if scn.verify_gradient:
        studies.append(verification.gradient_identity_study(
            scn.manifold, scn.init_field, _STUDY_GRIDS))
    if studies:
        sections["residuals"] = {s.name: _study_section(s) for s in studies}
    sections["closed_form_theta"] = verification.closed_form_theta(
        traj[0], scn.manifold)

    write_report(out / "report.txt", sections)
    write_trajectory_csv(out / "trajectory.csv", traj)
    if scn.svg:
        write_svg(out / "chart.svg", traj)

    code = EXIT_OK
    if rep.stop_reason is StopReason.BLOWUP:
        code = EXIT_BLOWUP
    elif rep.stop_reason is StopReason.GRAPH_LOSS:
        code = EXIT_GRAPH_LOSS
    if any(not b.passed for b in bounds) or any(not s.passed for s in studies):
        code = max(code, EXIT_FALSIFIED)

    tag = f"[{scn.name}]"
    print(f"{tag} stop={rep.stop_reason.value} t={rep.t_final:.6g} "
          f"steps={rep.steps} length {rep.length_initial:.9g} -> "
          f"{rep.length_final:.9g}")
    for b in bounds:
        print(f"{tag} bound {b.name}: {'PASS' if b.passed else 'FAIL'} "
              f"(worst slack {b.worst_slack:.3e})")
    for s in studies:
        orders = ", ".join(f"{o:.2f}" for o in s.orders)
        print(f"{tag} residual {s.name}: {'PASS' if s.passed else 'FAIL'} "
              f"(orders {orders})")
    print(f"{tag} wall seconds {wall:.3f}")
    print(f"{tag} exit {code}")
    return code, rep.stop_reason.value


def _cmd_single(args, force_verify: bool) -> int:
    scn = _load_scenario(Path(args.config))
    if force_verify:
        scn = replace(scn, verify_bounds=True, verify_dissipation=True,
                      verify_evolution=True, verify_commutator=True,
                      verify_gradient=True)
    out = Path(args.out) if args.out else Path("wcsf_out") / scn.name
    code, _ = execute_scenario(scn, out)
    return code


def _cmd_suite(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"wcsf: error: {root} is not a directory", file=sys.stderr)
        return EXIT_USAGE
    paths = sorted(root.glob("*.cfg"))
    if not paths:
        print(f"wcsf: error: no .cfg files in {root}", file=sys.stderr)
        return EXIT_USAGE
    scenarios = [(p, _load_scenario(p)) for p in paths]
    out_root = Path(args.out) if args.out else Path("wcsf_out")
    jobs = max(1, int(args.jobs))
    outcomes = {}
    if jobs == 1:
        for p, scn in scenarios:
            outcomes[p] = execute_scenario(scn, out_root / p.stem)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [(p, pool.submit(execute_scenario, scn, out_root / p.stem))
                       for p, scn in scenarios]
            for p, fut in futures:
                outcomes[p] = fut.result()
    lines = [f"{p.stem}: exit {outcomes[p][0]} ({outcomes[p][1]})"
             for p in paths]
    out_root.mkdir(parents=True, exist_ok=True)
    with open(out_root / "summary.txt", "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        print(f"[suite] {line}")
    return max(code for code, _ in outcomes.values())


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_single(args, force_verify=False)
        if args.command == "verify":
            return _cmd_single(args, force_verify=True)
        return _cmd_suite(args)
    except ConfigError as exc:
        print(f"wcsf: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
