"""Build script.  The compiled stepper is optional: if Cython or a C
toolchain is missing the package still installs and falls back to the
pure-Python engine at import time."""

import os

from setuptools import setup, Extension

PYX = "src/slotsim/_faststep.pyx"

ext_modules = []
try:
    if not os.path.exists(PYX):
        raise ImportError(PYX)
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "slotsim._faststep",
                [PYX],
                libraries=["m"] if os.name == "posix" else [],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
