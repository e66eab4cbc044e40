"""Build script: compiles the optional Cython kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed extension build only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        ["src/kleindim/_kernels_c.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"kleindim: skipping compiled kernel ({exc!r})")
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
