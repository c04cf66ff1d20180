"""Deterministic file output: CSV, JSON, and run manifests.

Floats are rendered with ``repr`` (shortest round-trip form), rows are
emitted in a canonical order, and manifests carry no timestamps, so a given
config produces byte-identical files.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import scipy


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, fieldnames, rows) -> None:
    """Write rows (dicts) with a fixed column order and '\\n' newlines."""
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(name)) for name in fieldnames))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path, obj) -> None:
    text = json.dumps(_jsonable(obj), sort_keys=True, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")


def build_manifest(command: str, config, gates: dict, outputs: list[str]) -> dict:
    """Reproducibility record: config hash, versions, gate results."""
    from wirespin import __version__
    from wirespin import kernels

    return {
        "command": command,
        "config_sha256": config.sha256(),
        "package_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "versions": {
            "python": ".".join(str(v) for v in sys.version_info[:3]),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "gates": gates,
        "outputs": sorted(outputs),
    }
