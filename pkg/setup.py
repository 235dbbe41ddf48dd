"""Build the optional compiled kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("IMPCOMP_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            "src/impcomp/_ckernels.pyx",
            compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
        )
        for ext in ext_modules:
            ext.include_dirs.append(np.get_include())
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
