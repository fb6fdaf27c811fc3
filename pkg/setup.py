import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("steinlab._kernel", ["src/steinlab/_kernel.pyx"])],
        language_level="3",
    )
except ImportError:
    sys.stderr.write("Cython unavailable; building with the pure-python kernel only\n")

setup(ext_modules=ext_modules)
