"""Build hook for the optional compiled Monte Carlo kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing Cython toolchain degrades the build instead of
failing it.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "graphforge._kernel._native",
                ["src/graphforge/_kernel/_native.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
