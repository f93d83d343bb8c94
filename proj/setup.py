"""Builds the qrm2._core extension by delegating to the project's CMake tree."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        config = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake", "-S", str(source_dir), "-B", str(build_dir),
                f"-DCMAKE_BUILD_TYPE={config}",
                "-DQRM2_BUILD_PYTHON=ON",
                "-DQRM2_BUILD_CLI=OFF",
                "-DQRM2_BUILD_TESTS=OFF",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            [
                "cmake", "--build", str(build_dir),
                "--target", "qrm2_python",
                f"-j{os.cpu_count() or 1}",
            ],
            check=True,
        )
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out_dir.mkdir(parents=True, exist_ok=True)
        for item in (build_dir / "python" / "qrm2").iterdir():
            if item.suffix != ".py":  # __init__.py ships via package-dir
                self.copy_file(str(item), str(out_dir / item.name))


setup(
    ext_modules=[CMakeExtension("qrm2._core")],
    cmdclass={"build_ext": CMakeBuild},
)
