"""Spin-propagation kernel with compiled and pure-Python backends.

At import time the compiled Cython extension is preferred; if it is
missing (no compiler at install time) or the ``WIRESPIN_PURE_PYTHON``
environment variable is set, the numpy fallback is used. Both expose the
same ``propagate_path`` contract and are numerically interchangeable; see
``benchmarks/bench_spin_kernel.py`` for the speed comparison.
"""

from __future__ import annotations

import os

from wirespin.kernels import _magnus_py

BACKEND = "python"
propagate_path = _magnus_py.propagate_path

if not os.environ.get("WIRESPIN_PURE_PYTHON"):
    try:
        from wirespin.kernels import _magnus_cy

        BACKEND = "cython"
        propagate_path = _magnus_cy.propagate_path
    except ImportError:
        pass


def available_backends() -> tuple[str, ...]:
    """Names of the importable kernel backends."""
    names = ["python"]
    try:
        from wirespin.kernels import _magnus_cy  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return tuple(names)


def get_backend(name: str):
    """Fetch a specific backend's ``propagate_path`` (for tests/benchmarks)."""
    if name == "python":
        return _magnus_py.propagate_path
    if name == "cython":
        from wirespin.kernels import _magnus_cy

        return _magnus_cy.propagate_path
    raise ValueError(f"unknown kernel backend {name!r}")
