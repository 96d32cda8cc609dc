import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("UNITSAT_PURE") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "unitsat._dimacs_core",
                    ["src/unitsat/_dimacs_core.pyx"],
                    optional=True,
                )
            ],
            language_level=3,
        )

setup(
    package_dir={"": "src"},
    packages=["unitsat"],
    ext_modules=ext_modules,
)
