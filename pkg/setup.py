"""Build script: compiles the optional elimination kernel.

The package is fully functional without the extension; ospcoho.linalg
falls back to the pure-Python kernels when `ospcoho._kernels_cy` is
missing, so any build failure here is deliberately non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/ospcoho/_kernels_cy.pyx",
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on build env
    print(f"ospcoho: skipping Cython kernel build ({exc}); "
          "pure-Python backend will be used")

setup(ext_modules=ext_modules)
