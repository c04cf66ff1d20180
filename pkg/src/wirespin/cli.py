"""Command-line interface: window, orbit, adiabaticity, interfere, sweep.

Exit codes: 0 success, 2 validation/config problems, 3 physics-gate
failures (conservation, unitarity, step control, empty window), 4 geometry
errors (paths versus the wire disk).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from wirespin.config import RunConfig, load_config
from wirespin.errors import (
    EmptyWindowError,
    GeometryError,
    PhysicsGateError,
    ValidationError,
    WirespinError,
)
from wirespin.interferometer import full_experiment
from wirespin.orbit import (
    OrbitParams,
    analytic_orbit,
    asymptote_angles,
    conic_radius,
    current_window,
    eccentricity,
    integrate_orbit,
    integrate_orbit_from,
    launch_state,
    wire_feasibility,
    window_bounds,
)
from wirespin.output import build_manifest, write_csv, write_json
from wirespin.states import DensityMatrix, PlanarState
from wirespin.sweep import run_sweep, sweep_fieldnames
from wirespin.trajectory import straight_path
from wirespin.transport import adiabatic_profile

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PHYSICS = 3
EXIT_GEOMETRY = 4

_TRAJECTORY_FIELDS = (
    "t", "x", "y", "vx", "vy", "r", "theta", "energy", "angular_momentum",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wirespin",
        description=(
            "Semi-classical neutron spin transport around a current-carrying "
            "wire and the two-arm interferometer built on it"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="INI config file")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument(
            "--format",
            choices=("csv", "json", "both"),
            default=None,
            help="override configured output formats",
        )
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="config override (repeatable), same value grammar as the file",
        )

    p = sub.add_parser("window", help="admissible current window and wire sizing")
    common(p)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("orbit", help="analytic and integrated classical orbits")
    common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("adiabaticity", help="adiabaticity profile of a straight pass")
    common(p)
    p.set_defaults(func=cmd_adiabaticity)

    p = sub.add_parser("interfere", help="detector intensities of the full loop")
    common(p)
    p.add_argument(
        "--mode",
        choices=("analytic", "propagated", "both"),
        default="both",
        help="adiabatic closed form, full propagation, or both",
    )
    p.set_defaults(func=cmd_interfere)

    p = sub.add_parser("sweep", help="grid sweep over currents (and v, b)")
    common(p)
    p.add_argument(
        "--mode",
        choices=("analytic", "propagated", "both"),
        default="analytic",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.set)
        outdir: Path = args.out
        outdir.mkdir(parents=True, exist_ok=True)
        return args.func(args, config, outdir)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except PhysicsGateError as exc:
        print(f"physics gate failure: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except WirespinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _formats(args, config: RunConfig) -> tuple[str, ...]:
    if args.format is None:
        return config.output.formats
    if args.format == "both":
        return ("csv", "json")
    return (args.format,)


def _emit(outdir: Path, stem: str, formats, fieldnames, rows, payload) -> list[str]:
    written = []
    if "csv" in formats:
        path = outdir / f"{stem}.csv"
        write_csv(path, fieldnames, rows)
        written.append(path.name)
    if "json" in formats:
        path = outdir / f"{stem}.json"
        write_json(path, payload)
        written.append(path.name)
    return written


def _finish(outdir: Path, command: str, config: RunConfig, gates: dict, outputs: list[str]) -> None:
    manifest = build_manifest(command, config, gates, outputs)
    write_json(outdir / f"{command}_manifest.json", manifest)


def cmd_window(args, config: RunConfig, outdir: Path) -> int:
    consts = config.physical_constants()
    v = config.orbit.speed
    b = config.orbit.impact_parameter
    margin = config.window.margin
    i_low, i_high = window_bounds(v, b, consts)
    feasible = wire_feasibility(
        config.window.current_density_limit, config.geometry.wire_radius
    )
    window_ok = True
    diagnostic = ""
    try:
        current_window(v, b, consts, margin)
    except EmptyWindowError as exc:
        window_ok = False
        diagnostic = str(exc)
    report = {
        "speed": v,
        "impact_parameter": b,
        "current_low": i_low,
        "current_high": i_high,
        "ratio": i_high / i_low,
        "margin": margin,
        "window_ok": window_ok,
        "diagnostic": diagnostic,
        "wire_feasible_current": feasible,
        "feasible_current_inside_window": bool(
            window_ok and i_low * margin <= feasible <= i_high / margin
        ),
    }
    fieldnames = tuple(report)
    outputs = _emit(outdir, "window", _formats(args, config), fieldnames, [report], report)
    _finish(outdir, "window", config, {"window_ok": window_ok}, outputs)
    print(f"I_low  = {i_low:.6g} A")
    print(f"I_high = {i_high:.6g} A")
    print(f"wire feasible current = {feasible:.6g} A")
    print(f"window check at margin {margin:g}: {'PASS' if window_ok else 'FAIL'}")
    if not window_ok:
        print(diagnostic, file=sys.stderr)
        return EXIT_PHYSICS
    return EXIT_OK


def _trajectory_rows(traj) -> list[dict]:
    rows = []
    r = traj.r
    for i in range(len(traj)):
        rows.append(
            {
                "t": float(traj.t[i]),
                "x": float(traj.x[i]),
                "y": float(traj.y[i]),
                "vx": float(traj.vx[i]),
                "vy": float(traj.vy[i]),
                "r": float(r[i]),
                "theta": float(traj.theta[i]),
                "energy": None if traj.energy is None else float(traj.energy[i]),
                "angular_momentum": None
                if traj.angular_momentum is None
                else float(traj.angular_momentum[i]),
            }
        )
    return rows


def cmd_orbit(args, config: RunConfig, outdir: Path) -> int:
    consts = config.physical_constants()
    o = config.orbit
    formats = _formats(args, config)
    outputs: list[str] = []
    summary: dict = {"current": o.current, "speed": o.speed, "impact_parameter": o.impact_parameter}

    if o.current == 0.0:
        # force-free limit: integration only, the conic is undefined
        start = PlanarState(
            x=-o.launch_distance_factor * o.impact_parameter,
            y=o.impact_parameter,
            vx=o.speed,
            vy=0.0,
        )
        t_span = (0.0, 2.0 * o.launch_distance_factor * o.impact_parameter / o.speed)
        integrated = integrate_orbit_from(
            start, o.branch, 0.0, consts, t_span,
            n_samples=o.samples,
            wire_radius=config.geometry.wire_radius,
            conservation_tol=o.conservation_tol,
        )
        outputs += _emit(
            outdir, "orbit_integrated", formats, _TRAJECTORY_FIELDS,
            _trajectory_rows(integrated), _trajectory_rows(integrated),
        )
        de, dl = integrated.conservation_drift()
        summary.update(energy_drift=de, angular_momentum_drift=dl, analytic="skipped (zero current)")
        if "json" in formats:
            write_json(outdir / "orbit_summary.json", summary)
            outputs.append("orbit_summary.json")
        _finish(outdir, "orbit", config, {"energy_drift": de, "angular_momentum_drift": dl}, outputs)
        print(f"conservation drift: dE={de:.3e}, dL={dl:.3e} (zero-current run)")
        return EXIT_OK

    params = config.orbit_params()
    integrated = integrate_orbit(
        params, consts, n_samples=o.samples, conservation_tol=o.conservation_tol
    )
    de, dl = integrated.conservation_drift()

    if o.theta_start is not None and o.theta_end is not None:
        theta_grid = np.linspace(o.theta_start, o.theta_end, o.theta_samples)
    else:
        theta_grid = np.linspace(
            float(integrated.theta[0]), float(integrated.theta[-1]), o.theta_samples
        )
    analytic = analytic_orbit(params, consts, theta_grid)

    # matched-angle cross-check between the two routes
    r_conic_at_integrated = conic_radius(integrated.theta, params, consts)
    cross = float(np.max(np.abs(integrated.r - r_conic_at_integrated) / r_conic_at_integrated))

    lo, hi = asymptote_angles(params, consts)
    summary.update(
        branch=params.branch,
        eccentricity=eccentricity(params, consts),
        asymptote_angles=[lo, hi],
        energy_drift=de,
        angular_momentum_drift=dl,
        cross_check_max_rel_r=cross,
        conservation_tol=o.conservation_tol,
    )
    outputs += _emit(
        outdir, "orbit_integrated", formats, _TRAJECTORY_FIELDS,
        _trajectory_rows(integrated), _trajectory_rows(integrated),
    )
    outputs += _emit(
        outdir, "orbit_analytic", formats, _TRAJECTORY_FIELDS,
        _trajectory_rows(analytic), _trajectory_rows(analytic),
    )
    if "json" in formats:
        write_json(outdir / "orbit_summary.json", summary)
        outputs.append("orbit_summary.json")
    _finish(
        outdir, "orbit", config,
        {"energy_drift": de, "angular_momentum_drift": dl, "cross_check_max_rel_r": cross},
        outputs,
    )
    print(f"eccentricity = {summary['eccentricity']:.6g}")
    print(f"conservation drift: dE={de:.3e}, dL={dl:.3e}")
    print(f"conic vs integration, max relative r mismatch: {cross:.3e}")
    return EXIT_OK


def cmd_adiabaticity(args, config: RunConfig, outdir: Path) -> int:
    consts = config.physical_constants()
    o = config.orbit
    span = o.launch_distance_factor * o.impact_parameter
    traj = straight_path(
        (-span, o.impact_parameter), (span, o.impact_parameter), o.speed,
        n_samples=o.samples,
    )
    profile = adiabatic_profile(traj, o.current, consts)
    i_low, _ = window_bounds(o.speed, o.impact_parameter, consts)
    rows = [
        {
            "t": float(traj.t[i]),
            "x": float(traj.x[i]),
            "y": float(traj.y[i]),
            "v_theta": float(traj.v_theta[i]),
            "adiabaticity": float(profile[i]),
        }
        for i in range(len(traj))
    ]
    peak = float(np.max(profile))
    payload = {
        "current": o.current,
        "speed": o.speed,
        "impact_parameter": o.impact_parameter,
        "peak": peak,
        "current_low": i_low,
        "threshold": config.transport.adiabaticity_threshold,
        "profile": rows,
    }
    formats = _formats(args, config)
    outputs = _emit(
        outdir, "adiabaticity", formats,
        ("t", "x", "y", "v_theta", "adiabaticity"), rows, payload,
    )
    _finish(outdir, "adiabaticity", config, {"peak": peak}, outputs)
    print(f"adiabaticity peak = {peak:.6g} at current {o.current:g} A "
          f"(threshold {config.transport.adiabaticity_threshold:g})")
    return EXIT_OK


def _outcome_row(outcome, mode: str) -> dict:
    return {
        "mode": mode,
        "loop_phase": outcome.loop_phase,
        "i_d1": outcome.I_D1,
        "i_d2": outcome.I_D2,
        "visibility": outcome.visibility,
        "adiabaticity_max": outcome.adiabaticity_max,
        "warnings": "; ".join(outcome.warnings),
    }


def cmd_interfere(args, config: RunConfig, outdir: Path) -> int:
    consts = config.physical_constants()
    geometry = config.interferometer_geometry()
    rho = DensityMatrix.unpolarized()
    rows = []
    modes = ("analytic", "propagated") if args.mode == "both" else (args.mode,)
    agreement = None
    for mode in modes:
        outcome = full_experiment(
            geometry,
            config.orbit.current,
            config.orbit.speed,
            rho,
            consts,
            mode=mode,
            control=config.step_control(),
            samples_per_segment=config.transport.samples_per_segment,
            adiabaticity_threshold=config.transport.adiabaticity_threshold,
        )
        rows.append(_outcome_row(outcome, mode))
        print(
            f"{mode:>10}: I_D1 = {outcome.I_D1:.6g}, I_D2 = {outcome.I_D2:.6g}, "
            f"loop phase = {outcome.loop_phase:.6f} rad"
        )
        for warning in outcome.warnings:
            print(f"  warning: {warning}", file=sys.stderr)
    if len(rows) == 2:
        agreement = abs(rows[0]["i_d1"] - rows[1]["i_d1"])
        print(f"mode agreement |dI_D1| = {agreement:.3e}")
    payload = {"outcomes": rows, "mode_agreement": agreement}
    formats = _formats(args, config)
    fieldnames = ("mode", "loop_phase", "i_d1", "i_d2", "visibility", "adiabaticity_max", "warnings")
    outputs = _emit(outdir, "interference", formats, fieldnames, rows, payload)
    _finish(outdir, "interfere", config, {"mode_agreement": agreement}, outputs)
    return EXIT_OK


def cmd_sweep(args, config: RunConfig, outdir: Path) -> int:
    records = run_sweep(config, mode=args.mode, jobs=args.jobs)
    timings = config.output.timings
    rows = [r.as_dict(timings) for r in records]
    formats = _formats(args, config)
    outputs = _emit(outdir, "sweep", formats, sweep_fieldnames(timings), rows, rows)
    failures = sum(1 for r in records if r.error)
    _finish(outdir, "sweep", config, {"points": len(records), "failures": failures}, outputs)
    print(f"sweep complete: {len(records)} points, {failures} failures")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
