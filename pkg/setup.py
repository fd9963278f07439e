"""Build the optional compiled Mathieu kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python kernel at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PHOTOABSORB_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "photoabsorb._mathieu",
                    ["src/photoabsorb/_mathieu.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
