"""Physical constants in SI units.

The default set uses the commonly quoted rounded neutron moment
(mu = -9.65e-27 J/T) and mu0 = 4*pi*1e-7 Vs/(Am), so that back-of-envelope
arithmetic is reproduced digit for digit; :meth:`PhysicalConstants.codata`
returns the CODATA-2018 precision values instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from wirespin.errors import ValidationError

#: Exclusion radius around the wire (m). The exterior field law only holds
#: outside the conductor; path operations reject anything closer.
DEFAULT_WIRE_RADIUS = 5e-3


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants for a neutron near a straight current-carrying wire.

    ``c0 = |mu| * mu0 / (4 pi)`` is the coupling constant of the local level
    splitting ``V(r) = +/- c0 * I / r`` (J m / A). It is derived from ``mu``
    and ``mu0`` unless supplied explicitly, in which case it is checked
    against the derived value to 1e-12 relative.
    """

    hbar: float = 1.054571817e-34    # J s
    m_n: float = 1.67492749804e-27   # kg
    mu: float = -9.65e-27            # J/T, negative for the neutron
    mu0: float = 4.0 * math.pi * 1e-7  # V s / (A m)
    c0: float = None  # type: ignore[assignment]  # J m / A, derived if None

    def __post_init__(self) -> None:
        derived = abs(self.mu) * self.mu0 / (4.0 * math.pi)
        if self.c0 is None:
            object.__setattr__(self, "c0", derived)
        elif not math.isclose(self.c0, derived, rel_tol=1e-12):
            raise ValidationError(
                f"c0={self.c0!r} inconsistent with |mu|*mu0/(4pi)={derived!r}"
            )
        if not (self.hbar > 0 and self.m_n > 0 and self.mu0 > 0 and self.c0 > 0):
            raise ValidationError("hbar, m_n, mu0 and c0 must be positive")
        if not self.mu < 0:
            raise ValidationError("mu must be negative for a neutron")

    @classmethod
    def codata(cls) -> "PhysicalConstants":
        """CODATA-2018 values (exact hbar, measured neutron moment)."""
        return cls(
            hbar=1.054571817e-34,
            m_n=1.67492749804e-27,
            mu=-9.6623651e-27,
            mu0=1.25663706212e-6,
        )

    def zeeman_coupling(self, current: float) -> float:
        """Level-splitting coefficient c0*I (J m) for a wire current in A."""
        return self.c0 * current
