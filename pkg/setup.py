"""Build script.

The compiled evaluation kernels are optional: if Cython (or a C compiler)
is unavailable the package installs anyway and falls back to the pure
Python implementations in ``ordstat._poly_eval_py``.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ordstat/_poly_eval.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
