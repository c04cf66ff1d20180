"""Exception hierarchy.

Three families map onto the CLI exit codes: validation problems (bad
parameters or config), geometry problems (paths versus the wire exclusion
disk), and physics-gate failures (a computation ran but violated one of the
conservation / unitarity / resolution gates).
"""


class WirespinError(Exception):
    """Base class for all package errors."""


class ValidationError(WirespinError):
    """Invalid parameters, configuration, or operator input."""


class OpenPathError(ValidationError):
    """A closed path was required but start and end do not coincide."""


class ConicRangeError(ValidationError):
    """Requested angles lie beyond the conic asymptotes."""


class GeometryError(WirespinError):
    """A path or arm conflicts with the wire exclusion disk."""


class SingularityError(GeometryError):
    """Evaluation at, or passage through, the wire exclusion zone."""


class WireCollisionError(GeometryError):
    """An integrated orbit entered the wire exclusion disk."""


class PhysicsGateError(WirespinError):
    """A computed result failed one of the physics quality gates."""


class ConservationError(PhysicsGateError):
    """Energy or angular momentum drift exceeded tolerance."""


class UnitarityError(PhysicsGateError):
    """Propagated state norm drifted beyond tolerance."""


class StepControlError(PhysicsGateError):
    """Step refinement could not satisfy the resolution gates."""


class EmptyWindowError(PhysicsGateError):
    """The admissible current window is empty at the requested margin."""
