"""Sampled classical paths with kinematic and conservation diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from wirespin.errors import ValidationError
from wirespin.paths import path_clearance, unwound_angles
from wirespin.states import PlanarState

_MAX_ANGLE_STEP = math.pi - 1e-9


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped samples (t, x, y, vx, vy) of a planar path.

    ``interpolation`` tells consumers how positions between samples are to
    be reconstructed: ``"linear"`` for constant-speed polylines (exact on
    straight segments, velocities are per-segment) and ``"cubic"`` for
    smooth sampled orbits (Hermite from positions and velocities).

    ``energy`` and ``angular_momentum`` are per-sample conserved-quantity
    diagnostics, populated for dynamical orbits and ``None`` for purely
    kinematic paths; ``branch`` is the spin branch (+1/-1) an orbit belongs
    to, ``None`` otherwise.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    interpolation: str = "cubic"
    branch: Optional[int] = None
    energy: Optional[np.ndarray] = None
    angular_momentum: Optional[np.ndarray] = None
    theta: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        arrays = {}
        for name in ("t", "x", "y", "vx", "vy"):
            a = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, a)
            arrays[name] = a
        n = self.t.shape[0]
        if n < 2 or any(a.shape != (n,) for a in arrays.values()):
            raise ValidationError("trajectory arrays must share one length >= 2")
        if not np.all(np.isfinite(self.t)) or not np.all(np.diff(self.t) > 0.0):
            raise ValidationError("sample times must be finite and strictly increasing")
        if self.interpolation not in ("linear", "cubic"):
            raise ValidationError(f"unknown interpolation {self.interpolation!r}")
        if self.branch not in (None, 1, -1):
            raise ValidationError("branch must be +1, -1 or None")
        pts = np.column_stack([self.x, self.y])
        theta = unwound_angles(pts)
        steps = np.abs(np.diff(theta))
        if steps.size and float(np.max(steps)) >= _MAX_ANGLE_STEP:
            raise ValidationError(
                "angular increment per sample reached pi; sample the path more densely"
            )
        object.__setattr__(self, "theta", theta)
        for name in ("energy", "angular_momentum"):
            a = getattr(self, name)
            if a is not None:
                a = np.asarray(a, dtype=float)
                if a.shape != (n,):
                    raise ValidationError(f"{name} must match the sample count")
                object.__setattr__(self, name, a)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    @property
    def r(self) -> np.ndarray:
        return np.hypot(self.x, self.y)

    @property
    def v_theta(self) -> np.ndarray:
        """Azimuthal velocity per sample (m/s, signed)."""
        return (self.x * self.vy - self.y * self.vx) / self.r

    @property
    def v_r(self) -> np.ndarray:
        return (self.x * self.vx + self.y * self.vy) / self.r

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def state(self, i: int) -> tuple[float, PlanarState]:
        """Sample ``i`` as (time, PlanarState) with the unwound angle."""
        return float(self.t[i]), PlanarState(
            x=float(self.x[i]),
            y=float(self.y[i]),
            vx=float(self.vx[i]),
            vy=float(self.vy[i]),
            theta=float(self.theta[i]),
        )

    def clearance(self) -> float:
        """Minimum origin distance of the sampled polyline."""
        return path_clearance(self.positions)

    def conservation_drift(self) -> tuple[float, float]:
        """Max relative drift of (energy, angular momentum) along the path."""
        if self.energy is None or self.angular_momentum is None:
            raise ValidationError("trajectory carries no conserved-quantity samples")
        e0, l0 = float(self.energy[0]), float(self.angular_momentum[0])
        de = float(np.max(np.abs(self.energy - e0))) / max(abs(e0), 1e-300)
        dl = float(np.max(np.abs(self.angular_momentum - l0))) / max(abs(l0), 1e-300)
        return de, dl


def polyline_trajectory(
    vertices, speed: float, samples_per_segment: int = 1
) -> Trajectory:
    """Constant-speed traversal of a polyline as a linear trajectory.

    Every segment is subdivided into ``samples_per_segment`` equal pieces;
    node velocities point along the segment being entered (the last node
    keeps the incoming direction).
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 2:
        raise ValidationError("polyline needs shape (M, 2) with M >= 2")
    if not speed > 0.0:
        raise ValidationError("traversal speed must be positive")
    if samples_per_segment < 1:
        raise ValidationError("samples_per_segment must be >= 1")
    xs, ys, vxs, vys, ts = [], [], [], [], []
    t_now = 0.0
    for a, b in zip(verts[:-1], verts[1:]):
        d = b - a
        length = math.hypot(*d)
        if length == 0.0:
            raise ValidationError("polyline contains a zero-length segment")
        u = d / length
        frac = np.arange(samples_per_segment) / samples_per_segment
        pts = a[None, :] + frac[:, None] * d[None, :]
        xs.append(pts[:, 0])
        ys.append(pts[:, 1])
        vxs.append(np.full(samples_per_segment, u[0] * speed))
        vys.append(np.full(samples_per_segment, u[1] * speed))
        ts.append(t_now + frac * (length / speed))
        t_now += length / speed
    xs.append([verts[-1, 0]])
    ys.append([verts[-1, 1]])
    u_last = (verts[-1] - verts[-2]) / math.hypot(*(verts[-1] - verts[-2]))
    vxs.append([u_last[0] * speed])
    vys.append([u_last[1] * speed])
    ts.append([t_now])
    return Trajectory(
        t=np.concatenate(ts),
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        vx=np.concatenate(vxs),
        vy=np.concatenate(vys),
        interpolation="linear",
    )


def straight_path(start, end, speed: float, n_samples: int = 129) -> Trajectory:
    """Single straight segment traversed at constant speed."""
    if n_samples < 2:
        raise ValidationError("a straight path needs at least 2 samples")
    return polyline_trajectory([start, end], speed, samples_per_segment=n_samples - 1)


def circular_loop(
    radius: float,
    speed: float,
    n_samples: int = 1024,
    turns: float = 1.0,
    theta0: float = 0.0,
    clockwise: bool = False,
) -> Trajectory:
    """Constant-speed circular path around the wire (cubic interpolation)."""
    if not (radius > 0.0 and speed > 0.0 and turns > 0.0):
        raise ValidationError("radius, speed and turns must be positive")
    if n_samples < 8:
        raise ValidationError("circular paths need at least 8 samples")
    sign = -1.0 if clockwise else 1.0
    total_angle = 2.0 * math.pi * turns
    theta = theta0 + sign * np.linspace(0.0, total_angle, n_samples)
    omega = sign * speed / radius
    t = np.linspace(0.0, total_angle * radius / speed, n_samples)
    x = radius * np.cos(theta)
    y = radius * np.sin(theta)
    return Trajectory(
        t=t,
        x=x,
        y=y,
        vx=-radius * omega * np.sin(theta),
        vy=radius * omega * np.cos(theta),
        interpolation="cubic",
    )
