"""Build the optional Cython kernels.

The package works without them: ``treestylo._kernels`` falls back to the
pure-Python implementation when the extension is missing. A failed compile
therefore only prints a warning instead of aborting the install.
"""
from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, no Python headers, ...
            print(f"warning: Cython kernels not built ({exc}); using pure Python")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using pure Python")


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("treestylo._ckernels", ["src/treestylo/_ckernels.pyx"])],
        compiler_directives={"language_level": "3", "boundscheck": False,
                             "wraparound": False},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
