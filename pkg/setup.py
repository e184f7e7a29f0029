"""Build script for the optional compiled kernel extension.

The package is pure Python plus one optional Cython module with the hot
finite-field loops. If Cython (or a C compiler) is unavailable the build
falls through and the pure-Python kernels are used at runtime.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hallforge._kernels",
                ["src/hallforge/_kernels.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
