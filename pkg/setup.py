"""Build script: compiles the optional fast kernel for the hyperbolic Schur solver.

The package works without the extension (a pure-numpy fallback is selected at
import time); building it just makes the displacement solver fast.
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
                "jspectral._gschur",
                sources=["src/jspectral/_gschur.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
