"""Build the optional Cython kernels; the package falls back to numpy if they are missing."""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TUBENULL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "tubenull._kernels",
                    ["src/tubenull/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
