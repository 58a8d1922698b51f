from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: install the pure-Python fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("catsem._kernel", ["src/catsem/_kernel.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
