"""Build script: compiles the optional Cython scanner extension.

The package is fully functional without the extension; cddlint.syntax.scanner
falls back to the pure-Python tokenizer when cddlint.syntax._scan_c is absent.
"""

import os

from setuptools import Extension, setup

PYX = "src/cddlint/syntax/_scan_c.pyx"

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext = Extension("cddlint.syntax._scan_c", sources=[PYX])
        ext.optional = True  # a failed compile must not fail the install
        ext_modules = cythonize([ext], language_level="3")
    except ImportError:
        pass

setup(ext_modules=ext_modules)
