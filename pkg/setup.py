"""Build hook for the optional compiled kernels.

The package works without the extension; ``cone_zeta.kernels`` falls back to
the pure-Python implementation when ``cone_zeta._kernels`` is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    import numpy

    extensions = [
        Extension(
            "cone_zeta._kernels",
            ["src/cone_zeta/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
            optional=True,
        )
    ]
    ext_modules = cythonize(extensions, compiler_directives={"language_level": 3})

setup(ext_modules=ext_modules)
