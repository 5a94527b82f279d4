"""Build hook for the optional compiled kernels.

The Cython extension is best-effort: when no compiler (or no Cython) is
available the package still installs and ``quadlie._backend`` falls back to
the pure-Python kernels.
"""
import os

import numpy as np
from setuptools import Extension, setup

extra = ["/O2"] if os.name == "nt" else ["-O3"]

ext_modules = []
if os.environ.get("QUADLIE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "quadlie._kernels",
                    ["src/quadlie/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=extra,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
