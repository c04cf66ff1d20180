"""Parameter sweeps over (speed, impact parameter, current) grids.

Grid points are independent pure evaluations, so they can fan out to a
process pool; records are sorted by input tuple before emission, making
serial and parallel runs byte-identical. A failing point is recorded with
an error string and the sweep continues.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Optional

from wirespin.config import RunConfig
from wirespin.errors import ValidationError
from wirespin.interferometer import full_experiment
from wirespin.orbit import OrbitParams, eccentricity
from wirespin.states import DensityMatrix

CSV_FIELDS = (
    "speed",
    "impact_parameter",
    "current",
    "geometry_id",
    "eccentricity",
    "adiabaticity_max",
    "fidelity",
    "loop_phase",
    "i_d1_analytic",
    "i_d2_analytic",
    "i_d1_propagated",
    "i_d2_propagated",
    "error",
)


@dataclass(frozen=True)
class SweepRecord:
    speed: float
    impact_parameter: float
    current: float
    geometry_id: str
    eccentricity: Optional[float] = None
    adiabaticity_max: Optional[float] = None
    fidelity: Optional[float] = None
    loop_phase: Optional[float] = None
    i_d1_analytic: Optional[float] = None
    i_d2_analytic: Optional[float] = None
    i_d1_propagated: Optional[float] = None
    i_d2_propagated: Optional[float] = None
    runtime_s: Optional[float] = None
    error: str = ""

    def as_dict(self, timings: bool) -> dict:
        d = {name: getattr(self, name) for name in CSV_FIELDS}
        if timings:
            d["runtime_s"] = self.runtime_s
        return d


def geometry_id(config: RunConfig) -> str:
    g = config.geometry
    return (
        f"a{g.arm_half_length!r}_h{g.arm_height!r}"
        f"_ox{g.wire_offset_x!r}_oy{g.wire_offset_y!r}"
    )


def _evaluate_point(args) -> SweepRecord:
    speed, impact, current, config, mode, timed = args
    start = time.perf_counter() if timed else None
    consts = config.physical_constants()
    gid = geometry_id(config)
    record = dict(speed=speed, impact_parameter=impact, current=current, geometry_id=gid)
    try:
        params = OrbitParams(
            speed=speed,
            impact_parameter=impact,
            current=current,
            branch=config.orbit.branch,
            launch_distance_factor=config.orbit.launch_distance_factor,
            wire_radius=config.geometry.wire_radius,
        )
        record["eccentricity"] = eccentricity(params, consts)
        geometry = config.interferometer_geometry()
        rho = DensityMatrix.unpolarized()
        analytic = full_experiment(
            geometry, current, speed, rho, consts,
            mode="analytic",
            adiabaticity_threshold=config.transport.adiabaticity_threshold,
        )
        record["loop_phase"] = analytic.loop_phase
        record["i_d1_analytic"] = analytic.I_D1
        record["i_d2_analytic"] = analytic.I_D2
        record["adiabaticity_max"] = analytic.adiabaticity_max
        if mode in ("propagated", "both"):
            propagated = full_experiment(
                geometry, current, speed, rho, consts,
                mode="propagated",
                control=config.step_control(),
                samples_per_segment=config.transport.samples_per_segment,
                adiabaticity_threshold=config.transport.adiabaticity_threshold,
            )
            record["i_d1_propagated"] = propagated.I_D1
            record["i_d2_propagated"] = propagated.I_D2
            record["adiabaticity_max"] = propagated.adiabaticity_max
            record["fidelity"] = _following_fidelity(
                geometry, current, speed, consts, config
            )
        error = ""
    except Exception as exc:  # partial-failure record, sweep continues
        error = f"{type(exc).__name__}: {exc}"
    runtime = (time.perf_counter() - start) if timed else None
    return SweepRecord(runtime_s=runtime, error=error, **record)


def _following_fidelity(geometry, current, speed, consts, config) -> float:
    """Adiabatic-following fidelity of |+> along the upper arm."""
    from wirespin.trajectory import polyline_trajectory
    from wirespin.transport import propagate_spin
    from wirespin.fields import local_eigenframe
    from wirespin.states import PlanarState

    traj = polyline_trajectory(
        geometry.arm_up - geometry.wire_position,
        speed,
        config.transport.samples_per_segment,
    )
    _, start_state = traj.state(0)
    plus0, _ = local_eigenframe(start_state)
    result = propagate_spin(
        traj, plus0, current, consts,
        config.step_control(), geometry.wire_radius,
    )
    return float(result.fidelity_history[-1, 0])


def run_sweep(config: RunConfig, mode: str = "analytic", jobs: int = 1) -> list[SweepRecord]:
    """Evaluate the configured grid; deterministic, order-independent."""
    if mode not in ("analytic", "propagated", "both"):
        raise ValidationError(f"unknown sweep mode {mode!r}")
    if jobs < 1:
        raise ValidationError("jobs must be >= 1")
    sw = config.sweep
    speeds = sw.speeds or (config.orbit.speed,)
    impacts = sw.impact_parameters or (config.orbit.impact_parameter,)
    currents = sw.currents
    if not currents:
        raise ValidationError("sweep requires a nonempty current grid")
    points = list(product(speeds, impacts, currents))
    if len(points) > sw.max_points:
        raise ValidationError(
            f"grid has {len(points)} points > max_points {sw.max_points}"
        )
    timed = config.output.timings
    args = [(v, b, i, config, mode, timed) for (v, b, i) in points]
    if jobs == 1:
        records = [_evaluate_point(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_evaluate_point, args))
    records.sort(key=lambda r: (r.speed, r.impact_parameter, r.current))
    return records


def sweep_fieldnames(timings: bool) -> tuple[str, ...]:
    return CSV_FIELDS + (("runtime_s",) if timings else ())
