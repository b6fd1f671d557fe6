"""Build script: compiles the optional solver-kernel extension when Cython
and a C compiler are available, otherwise falls back to a pure-Python wheel."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/jumppde/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
