"""Build script.

The compiled search kernels are optional: if Cython (or a C compiler) is
unavailable the package installs without them and falls back to the pure
Python engine at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "freqcube._engine._kernels",
                ["src/freqcube/_engine/_kernels.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
