from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python Smith kernel is used at runtime
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("strata_lab._snf", ["src/strata_lab/_snf.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
