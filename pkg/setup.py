import os

from setuptools import setup

# The compiled kernel is optional: the package falls back to the pure-Python
# backend when the extension is absent.  Set GALOISPOINTS_NO_EXT=1 to skip.
ext_modules = []
if os.environ.get("GALOISPOINTS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/galoispoints/_backend/_ckernel.pyx"], language_level=3
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
