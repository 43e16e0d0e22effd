"""Builds the optional compiled kernel extension.

The package works without it: sidewalk_access._kernels falls back to the
pure-Python backend when the extension is unavailable.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    # No -ffast-math: the pure and native backends must agree bit-for-bit.
    ext_modules = cythonize(
        [
            Extension(
                "sidewalk_access._kernels._native",
                ["src/sidewalk_access/_kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
