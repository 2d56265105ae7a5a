"""Build script: compiles the optional trajectory kernel.

The package is fully functional without the compiled extension (a pure
numpy fallback is selected at import time), so a failed compilation only
costs speed, never correctness.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "kerrcascade._traj_cy",
                ["src/kerrcascade/_traj_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"kerrcascade: skipping compiled trajectory kernel ({exc})")

setup(ext_modules=ext_modules)
