import os

from setuptools import setup

ext_modules = []
if os.environ.get("MRW_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/mrw/_fastwords.pyx"],
            language_level=3,
        )
    except Exception:
        # The package runs on the pure-Python kernel when the extension
        # cannot be built; see mrw/_words.py.
        ext_modules = []

setup(ext_modules=ext_modules)
