import argparse
import subprocess
import sys
from pathlib import Path

from utils import BASE_DIR, CORPUS_DIR, PKG_DIR


def build_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser."""
    parser = argparse.ArgumentParser(description="Build the idealistic command-line binary.")
    parser.add_argument(
        "--mode",
        choices=("onefile", "standalone"),
        default="onefile",
        help="Nuitka packaging mode (default: onefile)",
    )
    return parser


def _build_args(mode: str) -> list[str | Path]:
    """Return the Nuitka command arguments for the selected mode."""
    return [
        "uv",
        "run",
        "python",
        "-m",
        "nuitka",
        f"--output-dir={BASE_DIR / 'dist'}",
        f"--include-data-dir={CORPUS_DIR}=idealistic/corpus",
        "--output-filename=idealistic",
        f"--mode={mode}",
        PKG_DIR,
    ]


def run_build(mode: str = "onefile"):
    """Build the CLI using Nuitka."""
    try:
        _ = subprocess.run(_build_args(mode), check=True)
    except subprocess.CalledProcessError as e:
        print(f"Nuitka build failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    args = build_parser().parse_args()
    run_build(args.mode)
