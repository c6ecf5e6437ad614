"""Build script for the compiled kernel extension.

The extension is optional at runtime (chaoslab falls back to a pure-Python
backend) but the build itself requires Cython and a C compiler. Floating-point
contraction is disabled: the kernels promise one rounding per arithmetic
operation, so the compiler must not fuse a*b+c into an FMA.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext = Extension(
    "chaoslab._kernels",
    ["src/chaoslab/_kernels.pyx"],
    extra_compile_args=["-O3", "-ffp-contract=off", "-fno-math-errno"],
)

setup(
    ext_modules=cythonize([ext], language_level=3) if cythonize else [],
)
