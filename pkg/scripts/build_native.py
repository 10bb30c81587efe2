#!/usr/bin/env python3
"""Rebuild the Rust SAT bridge and copy it into the package tree.

Run after changing native/satbridge/src/lib.rs:

    python3 scripts/build_native.py [--profile release]
"""

from __future__ import annotations

import argparse
import platform
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CRATE = ROOT / "native" / "satbridge"
DEST = ROOT / "src" / "alcfit" / "_native"

_LIB_NAMES = {
    "Linux": "libsatbridge.so",
    "Darwin": "libsatbridge.dylib",
    "Windows": "satbridge.dll",
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--profile", choices=("release", "debug"),
                        default="release")
    args = parser.parse_args(argv)

    cmd = ["cargo", "build"]
    if args.profile == "release":
        cmd.append("--release")
    print("+", " ".join(cmd), f"(in {CRATE})")
    subprocess.run(cmd, cwd=CRATE, check=True)

    lib_name = _LIB_NAMES.get(platform.system(), "libsatbridge.so")
    built = CRATE / "target" / args.profile / lib_name
    if not built.exists():
        print(f"error: build artifact {built} not found", file=sys.stderr)
        return 1
    DEST.mkdir(parents=True, exist_ok=True)
    shutil.copy2(built, DEST / lib_name)
    print(f"copied {built} -> {DEST / lib_name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
