"""Build script for the optional compiled Monte-Carlo kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the contrast/sensitivity sweeps faster.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "spinlock._mc_kernel",
                ["src/spinlock/_mc_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
