import os

import numpy as np
from setuptools import Extension, setup

# CORPUSMIX_NO_EXT=1 installs the pure-Python fallback only
extensions = []
if not os.environ.get("CORPUSMIX_NO_EXT"):
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "corpusmix.lda._vem",
                ["src/corpusmix/lda/_vem.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
