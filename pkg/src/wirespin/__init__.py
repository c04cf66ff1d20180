"""Semi-classical neutron spin transport around a current-carrying wire.

The wire's azimuthal field defines position-dependent spin eigenstates
whose direction winds once around the wire; the package models the
classical hyperbolic orbit of the neutron, the full quantum evolution of
its spin along any path, the connection line integrals behind the
topological loop phase, and the two-arm interferometer that turns that
phase into a detector signature.
"""

from wirespin.constants import DEFAULT_WIRE_RADIUS, PhysicalConstants
from wirespin.errors import (
    ConicRangeError,
    ConservationError,
    EmptyWindowError,
    GeometryError,
    OpenPathError,
    PhysicsGateError,
    SingularityError,
    StepControlError,
    UnitarityError,
    ValidationError,
    WireCollisionError,
    WirespinError,
)
from wirespin.fields import (
    PhaseGauge,
    berry_connection,
    local_eigenframe,
    magnetic_field,
    zeeman_hamiltonian,
)
from wirespin.interferometer import (
    ArmPhaseBudget,
    InterferenceOutcome,
    InterferometerGeometry,
    arm_phase_budget,
    build_geometry,
    detector_intensities,
    full_experiment,
    loop_geometric_phase,
    loop_unitary,
)
from wirespin.orbit import (
    OrbitParams,
    analytic_orbit,
    asymptote_angles,
    conic_radius,
    current_window,
    eccentricity,
    eccentricity_from_conserved,
    integrate_orbit,
    integrate_orbit_from,
    launch_state,
    wire_feasibility,
    window_bounds,
)
from wirespin.paths import (
    line_integral_connection,
    winding_number,
)
from wirespin.states import DensityMatrix, PlanarState, Spinor, wrap_phase
from wirespin.trajectory import (
    Trajectory,
    circular_loop,
    polyline_trajectory,
    straight_path,
)
from wirespin.transport import (
    StepControl,
    TransportResult,
    adiabatic_profile,
    adiabaticity_functional,
    matrix_element_check,
    propagate_spin,
    propagation_operator,
)

__version__ = "0.1.0"
