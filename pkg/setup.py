"""Build script: compiles the optional F_p elimination kernel.

The package works without the extension (a pure-Python backend is selected
at import time), so any compile failure downgrades to a plain install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gerbekit/_kernels/_fpkern_c.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # Cython missing or cythonize failed
    print(f"gerbekit: skipping compiled kernel ({exc!r})")

try:
    setup(ext_modules=ext_modules)
except Exception as exc:
    print(f"gerbekit: compiled kernel build failed ({exc!r}); retrying pure Python")
    setup(ext_modules=[])
