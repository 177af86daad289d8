"""Build script for the compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), but Monte Carlo throughput is roughly an order of magnitude
higher with it; see benchmarks/bench_kernels.py.
"""

import numpy
from Cython.Build import cythonize
from setuptools import setup
from setuptools.extension import Extension

extensions = [
    Extension(
        "mediumband._kernels",
        sources=["src/mediumband/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
