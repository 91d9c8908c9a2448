"""Build script.

The compiled ball-evaluation kernel is optional: if Cython (or a working C
compiler) is unavailable the package installs anyway and falls back to the
pure-Python implementation at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("anosovcert._ballcore", ["src/anosovcert/_ballcore.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
