"""Polyline path utilities: unwound angles, connection integrals, winding.

A path is an (N, 2) array of vertices in the plane with the wire at the
origin (objects exposing a ``positions`` attribute, such as trajectories,
are accepted too). Per straight segment the polar angle is monotone and
sweeps less than pi, so the continuous angle along the whole path is the
sum of exact per-segment increments ``atan2(p0 x p1, p0 . p1)``; this makes
the connection line integral -(1/2) * (unwound angle change) exact for any
polyline that stays clear of the wire.
"""

from __future__ import annotations

import math

import numpy as np

from wirespin.constants import DEFAULT_WIRE_RADIUS
from wirespin.errors import OpenPathError, SingularityError, ValidationError
from wirespin.fields import PhaseGauge


def as_polyline(path) -> np.ndarray:
    """Coerce a path-like object to an (N, 2) float array of vertices."""
    pts = getattr(path, "positions", path)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValidationError("a path needs shape (N, 2) with N >= 2")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("path vertices must be finite")
    return pts


def angle_increments(points: np.ndarray) -> np.ndarray:
    """Signed angle swept around the origin by each segment (rad)."""
    p0, p1 = points[:-1], points[1:]
    cross = p0[:, 0] * p1[:, 1] - p0[:, 1] * p1[:, 0]
    dot = p0[:, 0] * p1[:, 0] + p0[:, 1] * p1[:, 1]
    return np.arctan2(cross, dot)


def unwound_angles(points: np.ndarray, theta0: float | None = None) -> np.ndarray:
    """Continuous polar angle at every vertex, anchored at the first one."""
    if theta0 is None:
        theta0 = math.atan2(points[0, 1], points[0, 0])
    return theta0 + np.concatenate([[0.0], np.cumsum(angle_increments(points))])


def segment_clearance(p0: np.ndarray, p1: np.ndarray) -> float:
    """Minimum distance from the origin to the segment p0-p1."""
    d = p1 - p0
    dd = float(d @ d)
    if dd == 0.0:
        return float(np.hypot(*p0))
    t = -float(p0 @ d) / dd
    t = min(1.0, max(0.0, t))
    q = p0 + t * d
    return float(np.hypot(*q))


def path_clearance(points: np.ndarray) -> float:
    """Minimum origin distance over all segments of a polyline."""
    p0, p1 = points[:-1], points[1:]
    d = p1 - p0
    dd = np.einsum("ij,ij->i", d, d)
    t = np.where(dd > 0.0, -np.einsum("ij,ij->i", p0, d) / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    q = p0 + t[:, None] * d
    return float(np.min(np.hypot(q[:, 0], q[:, 1])))


def require_clearance(points: np.ndarray, wire_radius: float) -> None:
    c = path_clearance(points)
    if c < wire_radius:
        raise SingularityError(
            f"path approaches the wire to {c:.3e} m < exclusion radius {wire_radius:.3e} m"
        )


def line_integral_connection(
    path,
    wire_radius: float = DEFAULT_WIRE_RADIUS,
    gauge: PhaseGauge | None = None,
) -> float:
    """Line integral of the connection along a path (rad).

    Equals -(1/2) * Delta theta with theta unwound along the path; a gauge
    twist chi adds chi(theta_start) - chi(theta_end). Additive over path
    concatenation, sign-reversed for the reversed path.
    """
    pts = as_polyline(path)
    require_clearance(pts, wire_radius)
    theta = unwound_angles(pts)
    result = -0.5 * float(theta[-1] - theta[0])
    if gauge is not None:
        result -= gauge.chi(float(theta[-1])) - gauge.chi(float(theta[0]))
    return result


def winding_number(
    path,
    wire_radius: float = DEFAULT_WIRE_RADIUS,
    closure_tol: float = 1e-9,
) -> int:
    """Signed number of turns of a closed polyline around the origin."""
    pts = as_polyline(path)
    gap = float(np.hypot(*(pts[-1] - pts[0])))
    if gap > closure_tol:
        raise OpenPathError(
            f"path endpoints differ by {gap:.3e} m > closure tolerance {closure_tol:.1e} m"
        )
    require_clearance(pts, wire_radius)
    theta = unwound_angles(pts)
    turns = (float(theta[-1] - theta[0])) / (2.0 * math.pi)
    n = round(turns)
    if abs(turns - n) > 1e-6:
        raise ValidationError(f"non-integer winding {turns!r} for a closed path")
    return int(n)


def inverse_radius_integral(points: np.ndarray) -> float:
    """Integral of ds / r along a polyline (dimensionless).

    Per segment, with s the signed coordinate along the segment direction
    measured from the perpendicular foot of the origin and d the distance
    from the origin to the segment's line,

        int ds / sqrt(d^2 + s^2) = asinh(s1/d) - asinh(s0/d),

    which is stable for segments passing close by the wire. Collinear
    segments (d = 0) reduce to |log(r1/r0)|.
    """
    p0, p1 = points[:-1], points[1:]
    seg = p1 - p0
    length = np.hypot(seg[:, 0], seg[:, 1])
    if np.any(length == 0.0):
        keep = length > 0.0
        p0, p1, seg, length = p0[keep], p1[keep], seg[keep], length[keep]
        if length.size == 0:
            return 0.0
    u = seg / length[:, None]
    s0 = np.einsum("ij,ij->i", p0, u)
    s1 = s0 + length
    d = np.abs(p0[:, 0] * u[:, 1] - p0[:, 1] * u[:, 0])
    out = np.empty_like(length)
    radial = d < 1e-15 * np.maximum(np.abs(s0), np.abs(s1))
    if np.any(radial):
        r0 = np.hypot(p0[radial, 0], p0[radial, 1])
        r1 = np.hypot(p1[radial, 0], p1[radial, 1])
        out[radial] = np.abs(np.log(r1 / r0))
    rest = ~radial
    out[rest] = np.arcsinh(s1[rest] / d[rest]) - np.arcsinh(s0[rest] / d[rest])
    return float(np.sum(out))


def path_length(points: np.ndarray) -> float:
    seg = np.diff(points, axis=0)
    return float(np.sum(np.hypot(seg[:, 0], seg[:, 1])))
