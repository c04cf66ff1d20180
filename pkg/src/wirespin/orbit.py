"""Classical translational motion in the spin-dependent 1/r potential.

A neutron on spin branch s = +1/-1 sees V_s(r) = s * c0 I / r and obeys

    m dv/dt = s * (c0 I / r^2) e_r,

so the +1 branch is repelled from the wire and the -1 branch attracted.
Energy and angular momentum are conserved and the bound orbit problem has
the conic solution

    r(theta) = p / (-s + eps * sin(theta)),     p = L^2 / (m c0 I),

with eccentricity eps = sqrt(1 + 2 E L^2 / (m c0^2 I^2)) > 1 for E > 0:
always a hyperbola. The launch convention is a beam coming in from the left
above the wire (y = +b, velocity +x), which puts the perihelion at
theta = pi/2 and makes theta decrease along the motion (L_z = -m v b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from wirespin.constants import DEFAULT_WIRE_RADIUS, PhysicalConstants
from wirespin.errors import (
    ConicRangeError,
    ConservationError,
    EmptyWindowError,
    ValidationError,
    WireCollisionError,
)
from wirespin.states import PlanarState
from wirespin.trajectory import Trajectory

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class OrbitParams:
    """Asymptotic orbit parameters and launch geometry.

    ``speed`` and ``impact_parameter`` are the incoming-asymptote values, so
    E = (1/2) m v^2 and |L| = m v b. ``launch_distance_factor`` places the
    integration start at x = -factor * b on the line y = +b.
    """

    speed: float
    impact_parameter: float
    current: float
    branch: int = 1
    launch_distance_factor: float = 20.0
    wire_radius: float = DEFAULT_WIRE_RADIUS

    def __post_init__(self) -> None:
        if not self.speed > 0.0:
            raise ValidationError("speed must be positive")
        if not self.impact_parameter > self.wire_radius:
            raise ValidationError(
                "impact parameter must exceed the wire exclusion radius"
            )
        if not self.current > 0.0:
            raise ValidationError("wire current must be positive")
        if self.branch not in (1, -1):
            raise ValidationError("branch must be +1 or -1")
        if not self.launch_distance_factor > 1.0:
            raise ValidationError("launch distance factor must exceed 1")

    def energy(self, consts: PhysicalConstants) -> float:
        return 0.5 * consts.m_n * self.speed**2

    def angular_momentum(self, consts: PhysicalConstants) -> float:
        """Magnitude m v b; the launch convention gives L_z = -m v b."""
        return consts.m_n * self.speed * self.impact_parameter

    def latus_rectum(self, consts: PhysicalConstants) -> float:
        L = self.angular_momentum(consts)
        return L * L / (consts.m_n * consts.c0 * self.current)


def eccentricity(params: OrbitParams, consts: PhysicalConstants) -> float:
    """Conic eccentricity sqrt(1 + (m v^2 b / (c0 I))^2); > 1 for any v > 0."""
    q = (
        consts.m_n
        * params.speed**2
        * params.impact_parameter
        / (consts.c0 * params.current)
    )
    return float(np.hypot(1.0, q))


def eccentricity_from_conserved(
    energy: float, angular_momentum: float, current: float, consts: PhysicalConstants
) -> float:
    """Eccentricity from conserved (E, L) directly."""
    return math.sqrt(
        1.0
        + 2.0
        * energy
        * angular_momentum**2
        / (consts.m_n * (consts.c0 * current) ** 2)
    )


def asymptote_angles(params: OrbitParams, consts: PhysicalConstants) -> tuple[float, float]:
    """Angle interval (theta_min, theta_max) on which the conic branch lives.

    The denominator -s + eps*sin(theta) vanishes at the asymptote angles.
    """
    eps = eccentricity(params, consts)
    delta = math.asin(1.0 / eps)
    if params.branch == -1:  # attractive: denominator 1 + eps sin(theta)
        return -delta, math.pi + delta
    return delta, math.pi - delta  # repulsive: -1 + eps sin(theta)


def conic_radius(theta, params: OrbitParams, consts: PhysicalConstants):
    """Analytic r(theta); raises beyond the asymptotes."""
    theta = np.asarray(theta, dtype=float)
    eps = eccentricity(params, consts)
    denom = -float(params.branch) + eps * np.sin(theta)
    if np.any(denom <= 0.0):
        lo, hi = asymptote_angles(params, consts)
        raise ConicRangeError(
            f"theta outside the conic branch; asymptote angles are "
            f"({lo:.6f}, {hi:.6f}) rad"
        )
    return params.latus_rectum(consts) / denom


def analytic_orbit(
    params: OrbitParams, consts: PhysicalConstants, theta_grid
) -> Trajectory:
    """Conic-solution trajectory sampled on a decreasing theta grid.

    Velocities come from the exact conic derivative and the conserved
    angular momentum; time stamps are reconstructed by per-interval
    Gauss-Legendre quadrature of dt = m r^2 / |L_z| dtheta.
    """
    theta = np.asarray(theta_grid, dtype=float)
    if theta.ndim != 1 or theta.shape[0] < 2:
        raise ValidationError("theta grid must be 1-D with at least 2 points")
    if not np.all(np.diff(theta) < 0.0):
        raise ValidationError(
            "theta grid must be strictly decreasing (the motion sweeps "
            "theta downward in the fixed launch convention)"
        )
    r = conic_radius(theta, params, consts)
    m = consts.m_n
    k = consts.c0 * params.current
    L_mag = params.angular_momentum(consts)
    Lz = -L_mag
    p = params.latus_rectum(consts)
    eps = eccentricity(params, consts)

    theta_dot = Lz / (m * r**2)
    dr_dtheta = -(r**2) * (m * k / L_mag**2) * eps * np.cos(theta)
    r_dot = dr_dtheta * theta_dot
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    x = r * cos_t
    y = r * sin_t
    vx = r_dot * cos_t - r * sin_t * theta_dot
    vy = r_dot * sin_t + r * cos_t * theta_dot

    # dt = m r^2 / |Lz| dtheta, integrated exactly enough per interval
    def radius(th):
        return p / (-float(params.branch) + eps * np.sin(th))

    mid = 0.5 * (theta[:-1] + theta[1:])
    half = 0.5 * (theta[1:] - theta[:-1])  # negative
    nodes = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    integrand = m * radius(nodes) ** 2 / L_mag
    dt = -half * (integrand @ _GAUSS_WEIGHTS)
    t = np.concatenate([[0.0], np.cumsum(dt)])

    energy = 0.5 * m * (vx**2 + vy**2) + params.branch * k / r
    ang_mom = m * (x * vy - y * vx)
    return Trajectory(
        t=t,
        x=x,
        y=y,
        vx=vx,
        vy=vy,
        interpolation="cubic",
        branch=params.branch,
        energy=energy,
        angular_momentum=ang_mom,
    )


def launch_state(params: OrbitParams) -> PlanarState:
    """Default upstream launch point on the line y = +b."""
    return PlanarState(
        x=-params.launch_distance_factor * params.impact_parameter,
        y=params.impact_parameter,
        vx=params.speed,
        vy=0.0,
    )


def integrate_orbit_from(
    initial: PlanarState,
    branch: int,
    current: float,
    consts: PhysicalConstants,
    t_span: tuple[float, float],
    n_samples: int = 1000,
    rtol: float = 1e-12,
    wire_radius: float = DEFAULT_WIRE_RADIUS,
    conservation_tol: float = 1e-9,
) -> Trajectory:
    """Integrate the equation of motion from an explicit initial state."""
    if branch not in (1, -1):
        raise ValidationError("branch must be +1 or -1")
    if current < 0.0:
        raise ValidationError("wire current must be nonnegative")
    if n_samples < 2:
        raise ValidationError("need at least 2 output samples")
    m = consts.m_n
    k = consts.c0 * current
    sign = float(branch)

    def rhs(_t, state):
        x, y, vx, vy = state
        r3 = (x * x + y * y) ** 1.5
        a = sign * k / (m * r3)
        return (vx, vy, a * x, a * y)

    def hit_wire(_t, state):
        return math.hypot(state[0], state[1]) - wire_radius

    hit_wire.terminal = True
    hit_wire.direction = -1.0

    r_scale = max(abs(initial.x), abs(initial.y), initial.r)
    v_scale = max(math.hypot(initial.vx, initial.vy), 1e-300)
    sol = solve_ivp(
        rhs,
        t_span,
        (initial.x, initial.y, initial.vx, initial.vy),
        method="DOP853",
        rtol=rtol,
        atol=[r_scale * 1e-14] * 2 + [v_scale * 1e-14] * 2,
        dense_output=True,
        events=hit_wire,
    )
    if sol.status == 1:
        t_hit = float(sol.t_events[0][0])
        raise WireCollisionError(
            f"orbit entered the wire exclusion disk at t = {t_hit:.6e} s"
        )
    if not sol.success:
        raise ConservationError(f"orbit integration failed: {sol.message}")

    ts = np.linspace(t_span[0], t_span[1], n_samples)
    xs, ys, vxs, vys = sol.sol(ts)
    r = np.hypot(xs, ys)
    energy = 0.5 * m * (vxs**2 + vys**2) + sign * k / r
    ang_mom = m * (xs * vys - ys * vxs)
    traj = Trajectory(
        t=ts,
        x=xs,
        y=ys,
        vx=vxs,
        vy=vys,
        interpolation="cubic",
        branch=branch,
        energy=energy,
        angular_momentum=ang_mom,
    )
    de, dl = traj.conservation_drift()
    if de > conservation_tol or dl > conservation_tol:
        raise ConservationError(
            f"conservation drift dE={de:.3e}, dL={dl:.3e} exceeds "
            f"{conservation_tol:.1e}"
        )
    return traj


def integrate_orbit(
    params: OrbitParams,
    consts: PhysicalConstants,
    t_span: tuple[float, float] | None = None,
    n_samples: int = 1000,
    rtol: float = 1e-12,
    conservation_tol: float = 1e-9,
) -> Trajectory:
    """Integrate the orbit from the default launch state.

    The default span carries the neutron from x = -factor*b to +factor*b at
    the asymptotic speed.
    """
    start = launch_state(params)
    if t_span is None:
        t_span = (
            0.0,
            2.0 * params.launch_distance_factor * params.impact_parameter / params.speed,
        )
    return integrate_orbit_from(
        start,
        params.branch,
        params.current,
        consts,
        t_span,
        n_samples=n_samples,
        rtol=rtol,
        wire_radius=params.wire_radius,
        conservation_tol=conservation_tol,
    )


def window_bounds(
    speed: float, impact_parameter: float, consts: PhysicalConstants
) -> tuple[float, float]:
    """Raw window bounds (I_low, I_high) without the margin gate."""
    if not (speed > 0.0 and impact_parameter > 0.0):
        raise ValidationError("speed and impact parameter must be positive")
    i_low = consts.hbar * speed / (4.0 * consts.c0)
    i_high = consts.m_n * speed**2 * impact_parameter / consts.c0
    return i_low, i_high


def current_window(
    speed: float,
    impact_parameter: float,
    consts: PhysicalConstants,
    margin: float = 10.0,
) -> tuple[float, float]:
    """Admissible current window (I_low, I_high).

    I_low = hbar v / (4 c0) keeps the spin following the field (taking the
    azimuthal velocity at its supremum v); I_high = m v^2 b / c0 keeps the
    orbit effectively straight (eccentricity >> 1). The window counts as
    nonempty when I_high / I_low > margin^2, i.e. both inequalities hold
    with a factor ``margin`` to spare.
    """
    if margin < 1.0:
        raise ValidationError("margin must be >= 1")
    i_low, i_high = window_bounds(speed, impact_parameter, consts)
    ratio = i_high / i_low
    if ratio <= margin**2:
        b_needed = margin**2 * consts.hbar / (4.0 * consts.m_n * speed)
        raise EmptyWindowError(
            f"window empty at margin {margin}: I_high/I_low = {ratio:.3e} "
            f"<= margin^2 = {margin**2:.3e}; need impact parameter "
            f"> {b_needed:.3e} m at this speed"
        )
    return i_low, i_high


def wire_feasibility(current_density_limit: float, wire_radius: float) -> float:
    """Maximum current (A) a wire of given radius carries at the density limit."""
    if current_density_limit < 0.0 or wire_radius < 0.0:
        raise ValidationError("current density and radius must be nonnegative")
    return current_density_limit * math.pi * wire_radius**2
