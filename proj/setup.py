import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen_include = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "k2st._k2st",
    [
        "bindings/k2st_module.cpp",
        "src/kernels.cpp",
        "src/regression.cpp",
        "src/stats.cpp",
        "src/datagen.cpp",
    ],
    include_dirs=["include", eigen_include],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
