"""Value types: planar kinematic states and two-level spin states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from wirespin.errors import ValidationError

_CONSISTENCY_TOL = 1e-12


def wrap_phase(phi: float) -> float:
    """Reduce a phase to the interval [-pi, pi)."""
    return float((phi + math.pi) % (2.0 * math.pi) - math.pi)


@dataclass(frozen=True)
class PlanarState:
    """Position and velocity in the plane transverse to the wire.

    ``theta`` is the polar angle and is allowed to be unwound (not reduced
    mod 2pi) so that paths can carry a continuous angle; it must stay
    consistent with (x, y) after reduction. The wire sits at the origin.
    """

    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0
    theta: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.theta is None:
            object.__setattr__(self, "theta", math.atan2(self.y, self.x))
        r = self.r
        if not (r > 0.0) or not math.isfinite(r):
            raise ValidationError("position must be finite and away from the wire axis")
        if abs(r * math.cos(self.theta) - self.x) > _CONSISTENCY_TOL * r or abs(
            r * math.sin(self.theta) - self.y
        ) > _CONSISTENCY_TOL * r:
            raise ValidationError(
                f"theta={self.theta!r} inconsistent with (x, y)=({self.x!r}, {self.y!r})"
            )

    @classmethod
    def from_polar(
        cls, r: float, theta: float, v_r: float = 0.0, v_theta: float = 0.0
    ) -> "PlanarState":
        c, s = math.cos(theta), math.sin(theta)
        return cls(
            x=r * c,
            y=r * s,
            vx=v_r * c - v_theta * s,
            vy=v_r * s + v_theta * c,
            theta=theta,
        )

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.vx, self.vy])

    @property
    def e_r(self) -> np.ndarray:
        return self.position / self.r

    @property
    def e_theta(self) -> np.ndarray:
        p = self.position / self.r
        return np.array([-p[1], p[0]])

    @property
    def v_r(self) -> float:
        """Radial velocity (m/s)."""
        return (self.x * self.vx + self.y * self.vy) / self.r

    @property
    def v_theta(self) -> float:
        """Azimuthal velocity r*d(theta)/dt (m/s), signed."""
        return (self.x * self.vy - self.y * self.vx) / self.r


@dataclass(frozen=True)
class Spinor:
    """Normalized two-component spin state in the sigma_z basis."""

    up: complex
    down: complex

    def __post_init__(self) -> None:
        n = abs(self.up) ** 2 + abs(self.down) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ValidationError(f"spinor norm^2 = {n!r}, expected 1")

    @classmethod
    def normalized(cls, up: complex, down: complex) -> "Spinor":
        n = math.sqrt(abs(up) ** 2 + abs(down) ** 2)
        if n == 0.0:
            raise ValidationError("cannot normalize the zero spinor")
        return cls(up / n, down / n)

    @classmethod
    def from_array(cls, a) -> "Spinor":
        a = np.asarray(a, dtype=complex)
        return cls.normalized(complex(a[0]), complex(a[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)

    def overlap(self, other: "Spinor") -> complex:
        """<self|other>."""
        return complex(np.conj(self.up) * other.up + np.conj(self.down) * other.down)

    def bloch_vector(self) -> np.ndarray:
        """Expectation values (<sx>, <sy>, <sz>)."""
        u, d = self.up, self.down
        return np.array(
            [
                2.0 * (np.conj(u) * d).real,
                2.0 * (np.conj(u) * d).imag,
                abs(u) ** 2 - abs(d) ** 2,
            ]
        )

    def density_matrix(self) -> "DensityMatrix":
        psi = self.as_array()
        return DensityMatrix(np.outer(psi, psi.conj()))


class DensityMatrix:
    """2x2 Hermitian, unit-trace, positive spin mixture."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = 1e-12) -> None:
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValidationError("density matrix must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValidationError("density matrix must be Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValidationError("density matrix must have unit trace")
        evals = np.linalg.eigvalsh(m)
        if evals[0] < -tol or evals[-1] > 1.0 + tol:
            raise ValidationError(f"density matrix eigenvalues {evals} outside [0, 1]")
        self.matrix = m

    @classmethod
    def unpolarized(cls) -> "DensityMatrix":
        return cls(0.5 * np.eye(2))

    @classmethod
    def pure(cls, spinor: Spinor) -> "DensityMatrix":
        return spinor.density_matrix()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __repr__(self) -> str:
        return f"DensityMatrix({self.matrix.tolist()!r})"
