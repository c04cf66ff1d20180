import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("WIRESPIN_SKIP_EXTENSION"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "wirespin.kernels._magnus_cy",
                    ["src/wirespin/kernels/_magnus_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython: install the pure-Python package; the kernel shim
        # falls back to the numpy implementation at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
