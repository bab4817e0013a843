from setuptools import setup
from setuptools.extension import Extension

# The compiled kernel is optional: without Cython (or a C compiler) the
# package falls back to the numpy implementations at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hetnetlb._kernels._speedups",
                ["src/hetnetlb/_kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
