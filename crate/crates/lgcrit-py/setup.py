"""Builds the lgcrit_py extension by delegating to cargo.

Neither maturin nor setuptools-rust is assumed; the build_ext command
compiles the cdylib with cargo and copies it to the extension path.
Install with `pip install -e . --no-build-isolation`.
"""

import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

HERE = Path(__file__).resolve().parent
WORKSPACE = HERE.parent.parent


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "lgcrit-py"],
            cwd=WORKSPACE,
            check=True,
        )
        if sys.platform == "darwin":
            built = WORKSPACE / "target" / "release" / "liblgcrit_py.dylib"
        elif sys.platform == "win32":
            built = WORKSPACE / "target" / "release" / "lgcrit_py.dll"
        else:
            built = WORKSPACE / "target" / "release" / "liblgcrit_py.so"
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(built, dest)


setup(
    ext_modules=[Extension("lgcrit_py", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
)
