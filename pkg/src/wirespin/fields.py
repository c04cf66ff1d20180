"""Magnetic field of the wire, the spin Hamiltonian, and its eigenframe.

Conventions
-----------
The wire lies along z through the origin; all positions are in the
transverse plane. With ``e_theta = (-sin t, cos t)`` the field is purely
azimuthal, ``B = mu0 I / (2 pi r) e_theta``, and the spin Hamiltonian is

    H = -(mu/2) sigma . B = (c0 I / r) sigma_theta,

with eigenvalues ``+/- c0 I / r``. The eigenframe is fixed to

    |+; t> = (1,  i e^{i t}) / sqrt(2),
    |-; t> = (1, -i e^{i t}) / sqrt(2),

which is single-valued in t mod 2pi and gives the connection
``i <+-|grad|+->  =  -(1/(2r)) e_theta`` for *both* states. Any other frame
differs by a position-dependent phase; only closed-loop integrals of the
connection are frame-independent. A :class:`PhaseGauge` can be supplied to
the frame-dependent operations to exercise exactly that covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from wirespin.constants import PhysicalConstants
from wirespin.errors import SingularityError, ValidationError
from wirespin.states import PlanarState, Spinor

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class PhaseGauge:
    """Smooth 2pi-periodic phase twist chi(theta) applied to the eigenframe.

    ``chi`` is the phase and ``dchi`` its derivative with respect to theta;
    both must be 2pi-periodic for the re-gauged frame to stay single-valued.
    """

    chi: Callable[[float], float]
    dchi: Callable[[float], float]


def sigma_r(theta: float) -> np.ndarray:
    """Radial Pauli combination e_r . sigma."""
    return math.cos(theta) * SIGMA_X + math.sin(theta) * SIGMA_Y


def sigma_theta(theta: float) -> np.ndarray:
    """Azimuthal Pauli combination e_theta . sigma."""
    return -math.sin(theta) * SIGMA_X + math.cos(theta) * SIGMA_Y


def _require_off_axis(p: PlanarState) -> float:
    r = p.r
    if not r > 0.0:
        raise SingularityError("field is singular on the wire axis (r = 0)")
    return r


def magnetic_field(
    p: PlanarState, current: float, consts: PhysicalConstants
) -> np.ndarray:
    """In-plane field vector (T) of the straight wire at ``p``.

    Magnitude mu0*I/(2 pi r), direction e_theta.
    """
    if not current > 0.0:
        raise ValidationError("wire current must be positive")
    r = _require_off_axis(p)
    scale = consts.mu0 * current / (2.0 * math.pi * r)
    return scale * np.array([-p.y / r, p.x / r])


def zeeman_hamiltonian(
    p: PlanarState, current: float, consts: PhysicalConstants
) -> np.ndarray:
    """2x2 Hermitian spin Hamiltonian (J) at ``p``: (c0 I / r) sigma_theta."""
    r = _require_off_axis(p)
    scale = consts.c0 * current / r
    # sigma_theta built from the exact position ratios, no trig round trip
    c, s = p.x / r, p.y / r
    return scale * (-s * SIGMA_X + c * SIGMA_Y)


def local_eigenframe(
    p: PlanarState, gauge: PhaseGauge | None = None
) -> tuple[Spinor, Spinor]:
    """Eigenstates (|+>, |->) of sigma_theta at ``p`` in the fixed frame."""
    phase = np.exp(1j * p.theta)
    if gauge is not None:
        phase_g = np.exp(1j * gauge.chi(p.theta))
    else:
        phase_g = 1.0
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    plus = Spinor(phase_g * inv_sqrt2, phase_g * 1j * phase * inv_sqrt2)
    minus = Spinor(phase_g * inv_sqrt2, phase_g * (-1j) * phase * inv_sqrt2)
    return plus, minus


def berry_connection(
    p: PlanarState, gauge: PhaseGauge | None = None
) -> np.ndarray:
    """Connection vector i<s|grad|s> (1/m) at ``p``; equal for both states.

    In the fixed frame this is -(1/(2r)) e_theta; a gauge twist chi shifts it
    by -(dchi/dtheta)/r e_theta.
    """
    r = _require_off_axis(p)
    coeff = -0.5 / r
    if gauge is not None:
        coeff -= gauge.dchi(p.theta) / r
    return coeff * np.array([-p.y / r, p.x / r])
