"""Build the _core extension by driving the repository's CMake project, so
the compiler flags and sources stay defined in one place."""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake", "-S", str(source_dir), "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        try:
            cmake_dir = subprocess.run(
                [sys.executable, "-m", "pybind11", "--cmakedir"],
                capture_output=True, text=True, check=True).stdout.strip()
            configure.append(f"-Dpybind11_DIR={cmake_dir}")
        except (OSError, subprocess.CalledProcessError):
            pass  # let find_package locate it
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core",
             "--parallel", str(os.cpu_count() or 2)],
            check=True)

        built = sorted(build_dir.glob("_core.*"))
        if not built:
            raise RuntimeError(f"cmake produced no _core module in {build_dir}")
        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], out_path)


setup(
    ext_modules=[CMakeExtension("nobond._core")],
    cmdclass={"build_ext": CMakeBuild},
)
