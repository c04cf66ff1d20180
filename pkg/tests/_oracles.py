"""Independent numerical oracles shared by the test modules.

Everything here deliberately avoids the code paths it is used to check:
line integrals go through adaptive quadrature of the connection field,
loops are built from raw vertex lists, and phases are compared on the
circle.
"""

import math

import numpy as np
from scipy.integrate import quad

from wirespin import berry_connection
from wirespin.states import PlanarState


def phase_distance(a: float, b: float) -> float:
    """Distance between two phases on the circle (rad)."""
    return abs(math.atan2(math.sin(a - b), math.cos(a - b)))


def connection_integral_quad(points, gauge=None, tol: float = 1e-12) -> float:
    """Adaptive quadrature of the connection along a polyline."""
    total = 0.0
    points = np.asarray(points, dtype=float)
    for p0, p1 in zip(points[:-1], points[1:]):
        d = p1 - p0

        def integrand(t):
            p = p0 + t * d
            a_vec = berry_connection(PlanarState(p[0], p[1]), gauge)
            return float(a_vec @ d)

        val, _ = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
        total += val
    return total


def inverse_radius_quad(points, tol: float = 1e-12) -> float:
    """Adaptive quadrature of ds / r along a polyline."""
    total = 0.0
    points = np.asarray(points, dtype=float)
    for p0, p1 in zip(points[:-1], points[1:]):
        d = p1 - p0
        length = math.hypot(*d)

        def integrand(t):
            p = p0 + t * d
            return length / math.hypot(*p)

        val, _ = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
        total += val
    return total


def random_star_loop(
    rng: np.random.Generator,
    center=(0.0, 0.0),
    r_lo: float = 0.05,
    r_hi: float = 0.5,
    n_vertices: int = 12,
    clockwise: bool = False,
) -> np.ndarray:
    """Closed star-shaped polygon around ``center`` (winding +-1 there)."""
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n_vertices))
    radii = rng.uniform(r_lo, r_hi, n_vertices)
    if clockwise:
        angles = angles[::-1]
    pts = np.column_stack(
        [center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)]
    )
    return np.vstack([pts, pts[:1]])
