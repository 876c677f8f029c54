"""Build hook for the optional compiled kernels.

The package works without them; ``acimov_lint.rdf.distance`` falls back to
the pure-Python implementation when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ACIMOV_LINT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("acimov_lint._kernels", ["src/acimov_lint/_kernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
