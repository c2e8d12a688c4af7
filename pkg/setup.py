import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "bellcav._evolve",
                ["src/bellcav/_evolve.pyx"],
                include_dirs=[np.get_include()],
                # -fcx-limited-range drops the over/underflow rescue
                # path in complex multiplies so the stage loops
                # vectorize; amplitudes here are O(1), so the rescue
                # path is never needed
                extra_compile_args=["-O3", "-fcx-limited-range"],
            )
        ],
        language_level=3,
    )
else:
    # No Cython available: the package falls back to the numpy kernel.
    ext_modules = []

setup(ext_modules=ext_modules)
