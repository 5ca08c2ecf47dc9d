from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("opticbm._ckernel", ["src/opticbm/_ckernel.pyx"])],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    # No Cython available: install pure-Python only; the package falls back
    # to opticbm._pykernel at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
