from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    # pure-python fallback kernels are selected at import time
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "sepfaces._kernels._cyjacobi",
                ["src/sepfaces/_kernels/_cyjacobi.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
