"""Extension build for the python package.

CMake remains the primary build system; this mirrors the library source
list so `pip install -e . --no-build-isolation` works with plain
setuptools + pybind11.
"""

from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

extension = Pybind11Extension(
    "tmkit._tmkit",
    ["bindings/module.cpp"] + sorted(glob("src/*.cpp")),
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[extension], cmdclass={"build_ext": build_ext})
