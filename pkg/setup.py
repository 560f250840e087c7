"""Build the optional Cython elimination kernel.

The extension is marked optional: if it fails to compile, the package still
installs and falls back to the pure-Python kernel at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "verdier.kernels._celim",
                ["src/verdier/kernels/_celim.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception:  # pragma: no cover - no Cython, or the .pyx failed to translate
    ext_modules = []

setup(ext_modules=ext_modules)
