import subprocess
import sys


def run_dev():
    """Runs the bundled corpus through the CLI."""
    try:
        _ = subprocess.run(["uv", "run", "-m", "idealistic", *(sys.argv[1:] or ["corpus"])], check=True)
    except subprocess.CalledProcessError as e:
        print(f"Running corpus failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    run_dev()
