"""Two-arm triple-plate interferometer around the wire.

Plates sit at the beam crossing points P (split) and Q (recombine) with
mirror vertices M_up / M_down between them; the wire pierces the enclosed
area. Per arm the spin picks up the connection line integral plus a
branch-dependent dynamical phase; recombination at Q with ideal 50:50
splitters gives detector intensities

    I_D1 = (1 + Re Tr(rho U)) / 2,      I_D2 = 1 - I_D1,

where U is the loop evolution operator (down arm forward, up arm
reversed — counterclockwise in the standard layout). With the wire on the
P-Q symmetry line the dynamical phases cancel identically and U reduces to
the pure loop phase factor: -1 for any geometry enclosing the wire once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from wirespin.constants import DEFAULT_WIRE_RADIUS, PhysicalConstants
from wirespin.errors import GeometryError, ValidationError
from wirespin.fields import PhaseGauge
from wirespin.paths import (
    inverse_radius_integral,
    line_integral_connection,
    path_clearance,
    path_length,
    winding_number,
)
from wirespin.states import DensityMatrix, wrap_phase
from wirespin.trajectory import polyline_trajectory
from wirespin.transport import StepControl, adiabatic_profile, propagation_operator


@dataclass(frozen=True)
class InterferometerGeometry:
    """Plate/crossing points, mirror vertices, and the wire position.

    All points are in lab coordinates; ``wire_position`` locates the wire,
    and path operations shift into wire-centered coordinates internally.
    """

    P: np.ndarray
    Q: np.ndarray
    M_up: np.ndarray
    M_down: np.ndarray
    wire_position: np.ndarray
    wire_radius: float = DEFAULT_WIRE_RADIUS

    def __post_init__(self) -> None:
        for name in ("P", "Q", "M_up", "M_down", "wire_position"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (2,) or not np.all(np.isfinite(v)):
                raise ValidationError(f"{name} must be a finite 2-vector")
            object.__setattr__(self, name, v)
        if not self.wire_radius > 0.0:
            raise ValidationError("wire radius must be positive")
        for name, arm in (("up", self.arm_up), ("down", self.arm_down)):
            c = path_clearance(arm - self.wire_position)
            if c < self.wire_radius:
                raise GeometryError(
                    f"arm_{name} passes within {c:.3e} m of the wire "
                    f"(< exclusion radius {self.wire_radius:.3e} m)"
                )

    @property
    def arm_up(self) -> np.ndarray:
        return np.vstack([self.P, self.M_up, self.Q])

    @property
    def arm_down(self) -> np.ndarray:
        return np.vstack([self.P, self.M_down, self.Q])

    @property
    def loop(self) -> np.ndarray:
        """Closed loop: down arm forward, up arm reversed (counterclockwise
        in the standard layout)."""
        return np.vstack([self.P, self.M_down, self.Q, self.M_up, self.P])

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """Mirror symmetry across the P-Q line with the wire on that line."""
        axis = self.Q - self.P
        norm = float(np.hypot(*axis))
        if norm == 0.0:
            return False
        u = axis / norm

        def reflect(v: np.ndarray) -> np.ndarray:
            rel = v - self.P
            along = float(rel @ u)
            perp = rel - along * u
            return self.P + along * u - perp

        scale = max(norm, float(np.hypot(*(self.M_up - self.P))))
        if float(np.max(np.abs(reflect(self.M_up) - self.M_down))) > tol * scale:
            return False
        rel = self.wire_position - self.P
        off_axis = rel - float(rel @ u) * u
        return float(np.hypot(*off_axis)) <= tol * scale

    def winding(self) -> int:
        """Turns of the loop around the wire (sign follows loop orientation)."""
        return winding_number(self.loop - self.wire_position, self.wire_radius)


def build_geometry(
    arm_half_length: float,
    arm_height: float,
    wire_offset=(0.0, 0.0),
    wire_radius: float = DEFAULT_WIRE_RADIUS,
) -> InterferometerGeometry:
    """Symmetric-by-construction geometry: P=(-a,0), Q=(a,0), M=(0,+-h),
    with the wire displaced by ``wire_offset`` from the loop center."""
    if not (arm_half_length > 0.0 and arm_height > 0.0):
        raise ValidationError("arm dimensions must be positive")
    a, h = float(arm_half_length), float(arm_height)
    return InterferometerGeometry(
        P=np.array([-a, 0.0]),
        Q=np.array([a, 0.0]),
        M_up=np.array([0.0, h]),
        M_down=np.array([0.0, -h]),
        wire_position=np.asarray(wire_offset, dtype=float),
        wire_radius=wire_radius,
    )


@dataclass(frozen=True)
class ArmPhaseBudget:
    """Per-arm phase inventory at traversal speed v.

    ``geometric`` is the connection line integral in the fixed frame (frame
    convention dependent for an open arm); ``dynamical_plus/minus`` are
    -(1/hbar) int V_branch dt for the two branches; budgets add over
    concatenated segments.
    """

    geometric: float
    dynamical_plus: float
    dynamical_minus: float
    transit_time: float

    def dynamical(self, branch: int) -> float:
        if branch == 1:
            return self.dynamical_plus
        if branch == -1:
            return self.dynamical_minus
        raise ValidationError("branch must be +1 or -1")


def arm_phase_budget(
    arm,
    speed: float,
    current: float,
    consts: PhysicalConstants,
    wire_position=(0.0, 0.0),
    wire_radius: float = DEFAULT_WIRE_RADIUS,
    gauge: PhaseGauge | None = None,
) -> ArmPhaseBudget:
    """Phase budget of one arm polyline traversed at constant speed."""
    if not speed > 0.0:
        raise ValidationError("traversal speed must be positive")
    if not current > 0.0:
        raise ValidationError("wire current must be positive")
    pts = np.asarray(arm, dtype=float) - np.asarray(wire_position, dtype=float)
    geometric = line_integral_connection(pts, wire_radius, gauge)
    # int V dt = (c0 I / v) int ds / r at constant speed
    q = inverse_radius_integral(pts)
    dyn_plus = -consts.c0 * current * q / (consts.hbar * speed)
    return ArmPhaseBudget(
        geometric=geometric,
        dynamical_plus=dyn_plus,
        dynamical_minus=-dyn_plus,
        transit_time=path_length(pts) / speed,
    )


@dataclass(frozen=True)
class InterferenceOutcome:
    """Detector intensities and the loop operator behind them.

    ``loop_phase`` is the enclosed-loop connection integral (mod 2pi,
    frame independent); None when the producing operation only saw a bare
    operator. ``visibility`` is |Tr(rho U)|.
    """

    I_D1: float
    I_D2: float
    visibility: float
    U_loop: np.ndarray
    loop_phase: Optional[float] = None
    mode: Optional[str] = None
    adiabaticity_max: Optional[float] = None
    warnings: tuple[str, ...] = ()
    analytic_reference: Optional["InterferenceOutcome"] = None
    mode_agreement: Optional[float] = None


def _eigenframe_columns(theta: float) -> np.ndarray:
    """Columns |+;theta>, |-;theta> in the z basis."""
    phase = np.exp(1j * theta)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return np.array(
        [[inv_sqrt2, inv_sqrt2], [1j * phase * inv_sqrt2, -1j * phase * inv_sqrt2]]
    )


def loop_geometric_phase(
    geometry: InterferometerGeometry, gauge: PhaseGauge | None = None
) -> float:
    """Connection integral around the interferometer loop (rad, signed)."""
    return line_integral_connection(
        geometry.loop - geometry.wire_position, geometry.wire_radius, gauge
    )


def loop_unitary(
    geometry: InterferometerGeometry,
    current: float,
    speed: float,
    consts: PhysicalConstants,
    gauge: PhaseGauge | None = None,
) -> np.ndarray:
    """Adiabatic loop evolution operator U (z basis, based at P).

    U = sum_s exp(i [loop connection integral + dynamical mismatch_s])
    |s;P><s;P|. For a symmetric geometry the mismatch vanishes identically
    and U = exp(i * loop phase) * identity = -identity when the loop
    encloses the wire once.
    """
    budget_up = arm_phase_budget(
        geometry.arm_up, speed, current, consts,
        geometry.wire_position, geometry.wire_radius, gauge,
    )
    budget_down = arm_phase_budget(
        geometry.arm_down, speed, current, consts,
        geometry.wire_position, geometry.wire_radius, gauge,
    )
    loop_geo = budget_down.geometric - budget_up.geometric
    phi_plus = loop_geo + (budget_down.dynamical_plus - budget_up.dynamical_plus)
    phi_minus = loop_geo + (budget_down.dynamical_minus - budget_up.dynamical_minus)
    rel = geometry.P - geometry.wire_position
    frame = _eigenframe_columns(math.atan2(rel[1], rel[0]))
    phases = np.array([np.exp(1j * phi_plus), np.exp(1j * phi_minus)])
    return frame @ np.diag(phases) @ frame.conj().T


def detector_intensities(
    rho: DensityMatrix, U: np.ndarray, unitarity_tol: float = 1e-10
) -> InterferenceOutcome:
    """Detector intensities for input mixture ``rho`` and loop operator U."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValidationError("loop operator must be 2x2")
    defect = float(np.max(np.abs(U.conj().T @ U - np.eye(2))))
    if defect > unitarity_tol:
        raise ValidationError(f"operator is not unitary (defect {defect:.3e})")
    tr = complex(np.trace(rho.matrix @ U))
    i_d1 = 0.5 * (1.0 + tr.real)
    i_d1 = min(1.0, max(0.0, i_d1))
    return InterferenceOutcome(
        I_D1=i_d1,
        I_D2=1.0 - i_d1,
        visibility=abs(tr),
        U_loop=U,
    )


def full_experiment(
    geometry: InterferometerGeometry,
    current: float,
    speed: float,
    rho: DensityMatrix,
    consts: PhysicalConstants,
    mode: str = "analytic",
    control: StepControl = StepControl(),
    samples_per_segment: int = 64,
    adiabaticity_threshold: float = 0.2,
    gauge: PhaseGauge | None = None,
) -> InterferenceOutcome:
    """Run the interferometer end to end.

    ``mode="analytic"`` composes the adiabatic per-arm budgets;
    ``mode="propagated"`` builds the arm operators by full spin propagation
    along the arms (non-adiabatic effects included); ``mode="both"`` runs
    both, returns the propagated outcome and attaches the analytic one plus
    the intensity disagreement.
    """
    if mode not in ("analytic", "propagated", "both"):
        raise ValidationError(f"unknown mode {mode!r}")
    loop_phase = wrap_phase(loop_geometric_phase(geometry, gauge))

    analytic_outcome = None
    if mode in ("analytic", "both"):
        U = loop_unitary(geometry, current, speed, consts, gauge)
        outcome = detector_intensities(rho, U)
        peak = consts.hbar * speed / (4.0 * consts.c0 * current)
        analytic_outcome = replace(
            outcome,
            loop_phase=loop_phase,
            mode="analytic",
            adiabaticity_max=peak,
            warnings=_adiabaticity_warnings(peak, adiabaticity_threshold),
        )
        if mode == "analytic":
            return analytic_outcome

    arms = []
    peak = 0.0
    for arm in (geometry.arm_up, geometry.arm_down):
        traj = polyline_trajectory(
            arm - geometry.wire_position, speed, samples_per_segment
        )
        arms.append(
            propagation_operator(traj, current, consts, control, geometry.wire_radius)
        )
        peak = max(peak, float(np.max(adiabatic_profile(traj, current, consts))))
    s_up, s_down = arms
    U = s_up.conj().T @ s_down
    outcome = detector_intensities(rho, U)
    agreement = (
        abs(outcome.I_D1 - analytic_outcome.I_D1) if analytic_outcome else None
    )
    return replace(
        outcome,
        loop_phase=loop_phase,
        mode="propagated" if mode == "propagated" else "both",
        adiabaticity_max=peak,
        warnings=_adiabaticity_warnings(peak, adiabaticity_threshold),
        analytic_reference=analytic_outcome,
        mode_agreement=agreement,
    )


def _adiabaticity_warnings(peak: float, threshold: float) -> tuple[str, ...]:
    if peak > threshold:
        return (
            f"adiabaticity measure peaks at {peak:.3g} > threshold "
            f"{threshold:.3g}; eigenstate following is unreliable",
        )
    return ()
