"""Run configuration: INI file with explicit unit suffixes.

Every physical quantity in the file carries a unit ("speed = 2000 m/s",
"wire_radius = 0.5 cm") and is converted to SI at parse time; dimensionless
and structural keys are plain. ``RunConfig`` round-trips: serializing a
validated config and re-parsing yields an equal object, and the canonical
text is what gets hashed into run manifests.

Grids accept three spellings::

    currents = list 100 A, 200 A, 400 A
    currents = linspace 50 A : 5000 A : 25
    currents = logspace 50 A : 5000 A : 25
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from wirespin.constants import PhysicalConstants
from wirespin.errors import ValidationError
from wirespin.interferometer import InterferometerGeometry, build_geometry
from wirespin.orbit import OrbitParams
from wirespin.transport import StepControl

UNITS: dict[str, dict[str, float]] = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "km": 1e3},
    "speed": {"m/s": 1.0, "km/s": 1e3, "cm/s": 1e-2},
    "current": {"A": 1.0, "kA": 1e3, "mA": 1e-3},
    "current_density": {"A/m^2": 1.0, "A/cm^2": 1e4, "A/mm^2": 1e6},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
}

#: Canonical (factor-1) unit used when writing configs back out.
CANONICAL_UNIT = {
    "length": "m",
    "speed": "m/s",
    "current": "A",
    "current_density": "A/m^2",
    "angle": "rad",
}


def parse_quantity(text: str, dimension: str, context: str = "") -> float:
    """Parse ``"<value> <unit>"`` into SI for the given dimension."""
    parts = text.split()
    where = f" for {context}" if context else ""
    if len(parts) != 2:
        raise ValidationError(
            f"expected '<value> <unit>'{where}, got {text!r} "
            f"(units: {', '.join(UNITS[dimension])})"
        )
    try:
        value = float(parts[0])
    except ValueError:
        raise ValidationError(f"bad number {parts[0]!r}{where}") from None
    table = UNITS[dimension]
    if parts[1] not in table:
        raise ValidationError(
            f"unknown {dimension} unit {parts[1]!r}{where} "
            f"(accepted: {', '.join(table)})"
        )
    return value * table[parts[1]]


def format_quantity(value: float, dimension: str) -> str:
    return f"{value!r} {CANONICAL_UNIT[dimension]}"


def _parse_grid(text: str, dimension: str, context: str) -> tuple[float, ...]:
    text = text.strip()
    if text.startswith("list"):
        items = text[len("list"):].split(",")
        if not items or not items[0].strip():
            raise ValidationError(f"empty grid for {context}")
        return tuple(parse_quantity(i.strip(), dimension, context) for i in items)
    for kind in ("linspace", "logspace"):
        if text.startswith(kind):
            parts = [p.strip() for p in text[len(kind):].split(":")]
            if len(parts) != 3:
                raise ValidationError(
                    f"{kind} grid for {context} needs 'lo : hi : count'"
                )
            lo = parse_quantity(parts[0], dimension, context)
            hi = parse_quantity(parts[1], dimension, context)
            try:
                count = int(parts[2])
            except ValueError:
                raise ValidationError(f"bad grid count {parts[2]!r} for {context}") from None
            if count < 1:
                raise ValidationError(f"grid count must be >= 1 for {context}")
            if kind == "logspace":
                if lo <= 0 or hi <= 0:
                    raise ValidationError(f"logspace needs positive bounds for {context}")
                vals = np.geomspace(lo, hi, count)
            else:
                vals = np.linspace(lo, hi, count)
            return tuple(float(v) for v in vals)
    raise ValidationError(
        f"grid for {context} must start with 'list', 'linspace' or 'logspace'"
    )


def _format_grid(values: tuple[float, ...], dimension: str) -> str:
    unit = CANONICAL_UNIT[dimension]
    return "list " + ", ".join(f"{v!r} {unit}" for v in values)


@dataclass(frozen=True)
class ConstantsConfig:
    profile: str = "rounded"  # rounded | codata

    def materialize(self) -> PhysicalConstants:
        if self.profile == "rounded":
            return PhysicalConstants()
        if self.profile == "codata":
            return PhysicalConstants.codata()
        raise ValidationError(f"unknown constants profile {self.profile!r}")


@dataclass(frozen=True)
class OrbitConfig:
    speed: float = 2000.0
    impact_parameter: float = 0.1
    current: float = 400.0
    branch: int = 1
    launch_distance_factor: float = 20.0
    samples: int = 1000
    conservation_tol: float = 1e-9
    theta_start: Optional[float] = None
    theta_end: Optional[float] = None
    theta_samples: int = 721


@dataclass(frozen=True)
class GeometryConfig:
    arm_half_length: float = 0.2
    arm_height: float = 0.1
    wire_offset_x: float = 0.0
    wire_offset_y: float = 0.0
    wire_radius: float = 5e-3


@dataclass(frozen=True)
class WindowConfig:
    margin: float = 10.0
    current_density_limit: float = 5e6  # A/m^2 (500 A/cm^2)


@dataclass(frozen=True)
class TransportConfig:
    steps_per_larmor: float = 50.0
    steps_per_rotation: float = 100.0
    convergence_tol: float = 1e-9
    max_refinements: int = 6
    max_steps: int = 50_000_000
    samples_per_segment: int = 64
    adiabaticity_threshold: float = 0.2


@dataclass(frozen=True)
class SweepConfig:
    currents: tuple[float, ...] = ()
    speeds: tuple[float, ...] = ()
    impact_parameters: tuple[float, ...] = ()
    max_points: int = 10_000


@dataclass(frozen=True)
class OutputConfig:
    formats: tuple[str, ...] = ("csv", "json")
    timings: bool = False


# (section, key) -> (kind, attribute); kind is a UNITS dimension, or one of
# "float", "int", "bool", "str", "branch", "grid:<dimension>",
# "optional_angle".
_SCHEMA: dict[str, dict[str, str]] = {
    "constants": {"profile": "str"},
    "orbit": {
        "speed": "speed",
        "impact_parameter": "length",
        "current": "current",
        "branch": "branch",
        "launch_distance_factor": "float",
        "samples": "int",
        "conservation_tol": "float",
        "theta_start": "optional_angle",
        "theta_end": "optional_angle",
        "theta_samples": "int",
    },
    "geometry": {
        "arm_half_length": "length",
        "arm_height": "length",
        "wire_offset_x": "length",
        "wire_offset_y": "length",
        "wire_radius": "length",
    },
    "window": {
        "margin": "float",
        "current_density_limit": "current_density",
    },
    "transport": {
        "steps_per_larmor": "float",
        "steps_per_rotation": "float",
        "convergence_tol": "float",
        "max_refinements": "int",
        "max_steps": "int",
        "samples_per_segment": "int",
        "adiabaticity_threshold": "float",
    },
    "sweep": {
        "currents": "grid:current",
        "speeds": "grid:speed",
        "impact_parameters": "grid:length",
        "max_points": "int",
    },
    "output": {"formats": "formats", "timings": "bool"},
}

_SECTION_TYPES = {
    "constants": ConstantsConfig,
    "orbit": OrbitConfig,
    "geometry": GeometryConfig,
    "window": WindowConfig,
    "transport": TransportConfig,
    "sweep": SweepConfig,
    "output": OutputConfig,
}


@dataclass(frozen=True)
class RunConfig:
    constants: ConstantsConfig = field(default_factory=ConstantsConfig)
    orbit: OrbitConfig = field(default_factory=OrbitConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    window: WindowConfig = field(default_factory=WindowConfig)
    transport: TransportConfig = field(default_factory=TransportConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        o = self.orbit
        if o.speed <= 0 or o.impact_parameter <= 0 or o.current < 0:
            raise ValidationError("orbit speed/impact parameter must be positive, current nonnegative")
        if o.samples < 2 or o.theta_samples < 2:
            raise ValidationError("orbit sample counts must be >= 2")
        if o.conservation_tol <= 0:
            raise ValidationError("conservation tolerance must be positive")
        g = self.geometry
        if g.arm_half_length <= 0 or g.arm_height <= 0 or g.wire_radius <= 0:
            raise ValidationError("geometry dimensions must be positive")
        if self.window.margin < 1.0:
            raise ValidationError("window margin must be >= 1")
        if self.window.current_density_limit < 0:
            raise ValidationError("current density limit must be nonnegative")
        t = self.transport
        if (
            t.steps_per_larmor <= 0
            or t.steps_per_rotation <= 0
            or t.convergence_tol <= 0
            or t.max_refinements < 1
            or t.max_steps < 1
            or t.samples_per_segment < 1
            or t.adiabaticity_threshold <= 0
        ):
            raise ValidationError("transport step-control settings must be positive")
        if self.sweep.max_points < 1:
            raise ValidationError("sweep max_points must be >= 1")
        for f in self.output.formats:
            if f not in ("csv", "json"):
                raise ValidationError(f"unknown output format {f!r}")
        if not self.output.formats:
            raise ValidationError("at least one output format is required")

    # -- materialization helpers -------------------------------------------
    def physical_constants(self) -> PhysicalConstants:
        return self.constants.materialize()

    def orbit_params(self) -> OrbitParams:
        o = self.orbit
        return OrbitParams(
            speed=o.speed,
            impact_parameter=o.impact_parameter,
            current=o.current,
            branch=o.branch,
            launch_distance_factor=o.launch_distance_factor,
            wire_radius=self.geometry.wire_radius,
        )

    def interferometer_geometry(self) -> InterferometerGeometry:
        g = self.geometry
        return build_geometry(
            g.arm_half_length,
            g.arm_height,
            (g.wire_offset_x, g.wire_offset_y),
            g.wire_radius,
        )

    def step_control(self) -> StepControl:
        t = self.transport
        return StepControl(
            steps_per_larmor=t.steps_per_larmor,
            steps_per_rotation=t.steps_per_rotation,
            convergence_tol=t.convergence_tol,
            max_refinements=t.max_refinements,
            max_steps=t.max_steps,
        )

    # -- serialization ------------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for section, keys in _SCHEMA.items():
            lines.append(f"[{section}]")
            obj = getattr(self, section)
            for key, kind in keys.items():
                value = getattr(obj, key)
                lines.append(f"{key} = {_format_value(value, kind)}")
            lines.append("")
        return "\n".join(lines)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())

    def sha256(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()


def _format_value(value, kind: str) -> str:
    if value is None:
        return "none"
    if kind in UNITS:
        return format_quantity(value, kind)
    if kind == "optional_angle":
        return format_quantity(value, "angle")
    if kind == "float":
        return repr(float(value))
    if kind == "int":
        return str(int(value))
    if kind == "bool":
        return "true" if value else "false"
    if kind == "str":
        return str(value)
    if kind == "branch":
        return "+" if value == 1 else "-"
    if kind == "formats":
        return " ".join(value)
    if kind.startswith("grid:"):
        return _format_grid(value, kind.split(":", 1)[1])
    raise ValidationError(f"unhandled config kind {kind!r}")


def _parse_value(text: str, kind: str, context: str):
    text = text.strip()
    if kind in UNITS:
        return parse_quantity(text, kind, context)
    if kind == "optional_angle":
        if text.lower() in ("none", ""):
            return None
        return parse_quantity(text, "angle", context)
    if kind == "float":
        try:
            return float(text)
        except ValueError:
            raise ValidationError(f"bad number {text!r} for {context}") from None
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ValidationError(f"bad integer {text!r} for {context}") from None
    if kind == "bool":
        low = text.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValidationError(f"bad boolean {text!r} for {context}")
    if kind == "str":
        return text
    if kind == "branch":
        if text in ("+", "+1", "plus"):
            return 1
        if text in ("-", "-1", "minus"):
            return -1
        raise ValidationError(f"bad branch {text!r} for {context} (use + or -)")
    if kind == "formats":
        formats = tuple(text.split())
        if not formats:
            raise ValidationError(f"empty formats for {context}")
        return formats
    if kind.startswith("grid:"):
        return _parse_grid(text, kind.split(":", 1)[1], context)
    raise ValidationError(f"unhandled config kind {kind!r}")


def _raw_from_ini(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValidationError(f"config parse error: {exc}") from None
    raw: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ValidationError(f"unknown config section [{section}]")
        raw[section] = {}
        for key, value in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ValidationError(f"unknown key {key!r} in section [{section}]")
            raw[section][key] = value
    return raw


def load_config(
    path=None, overrides: list[str] | tuple[str, ...] = ()
) -> RunConfig:
    """Build a RunConfig from an optional INI file plus CLI overrides.

    Overrides take the form ``section.key=value`` with the same value
    grammar as the file.
    """
    raw: dict[str, dict[str, str]] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            raw = _raw_from_ini(fh.read())
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ValidationError(
                f"override must look like section.key=value, got {item!r}"
            )
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        section, key = section.strip(), key.strip()
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ValidationError(f"unknown override target {target.strip()!r}")
        raw.setdefault(section, {})[key] = value.strip()
    return _build(raw)


def parse_config_text(text: str) -> RunConfig:
    """Parse a config from its serialized text (round-trip entry point)."""
    return _build(_raw_from_ini(text))


def _build(raw: dict[str, dict[str, str]]) -> RunConfig:
    kwargs = {}
    for section, keys in _SCHEMA.items():
        section_kwargs = {}
        for key, kind in keys.items():
            if section in raw and key in raw[section]:
                section_kwargs[key] = _parse_value(
                    raw[section][key], kind, f"{section}.{key}"
                )
        kwargs[section] = _SECTION_TYPES[section](**section_kwargs)
    return RunConfig(**kwargs)
