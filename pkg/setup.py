from setuptools import setup, Extension

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    # Source distributions without Cython fall back to the pure-Python
    # kernel selected at import time in catclust.backend.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "catclust._kernel",
                ["src/catclust/_kernel.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
