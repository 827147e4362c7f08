import os

from setuptools import setup

ext_modules = []
if os.environ.get("LSPACE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/lspace/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Pure-Python fallback is selected at import time; the extension
        # is an optimization, never a requirement.
        ext_modules = []

setup(ext_modules=ext_modules)
