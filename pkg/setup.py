#!/usr/bin/env python3
"""
Setup script for modcalc
"""
import sys
import subprocess
from pathlib import Path


def install_dependencies(dev=False):
    """Install required Python packages."""
    requirements = "requirements-dev.txt" if dev else "requirements.txt"
    print(f"Installing dependencies from {requirements}...")
    subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", requirements])
    print("Dependencies installed successfully!")


def verify_math_stack():
    """Verify that sympy and numpy import."""
    print("\nVerifying sympy and numpy...")
    result = subprocess.run(
        [sys.executable, "-c", "import sympy, numpy; print(sympy.__version__, numpy.__version__)"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    if result.returncode == 0:
        sympy_version, numpy_version = result.stdout.split()
        print(f"sympy {sympy_version}, numpy {numpy_version}")
        return True
    print("Error: sympy or numpy failed to import")
    print(result.stderr.strip())
    return False


def setup_configuration():
    """Create and validate the default configuration."""
    print("\nSetting up configuration...")
    config_script = Path("src") / "modcalc" / "config_setup.py"

    if config_script.exists():
        subprocess.check_call([sys.executable, "-c",
                               "from src.modcalc.config_setup import bootstrap_default_config; "
                               "bootstrap_default_config()"])
    else:
        print(f"Configuration script not found at {config_script}")


def main():
    print("Setting up modcalc...")
    print()

    install_dependencies(dev="--dev" in sys.argv)

    if not verify_math_stack():
        print("\nPlease fix the sympy/numpy installation before continuing.")
        return

    setup_configuration()

    print("\nSetup complete! Try:")
    print("python src/modcalc/main.py eval lm --p 3 --m 2 --x 7")
    print("python src/modcalc/main.py claims run --all --p 3 --m 3")


def _packaging_setup():
    """Package metadata for pip / setuptools builds."""
    from setuptools import find_namespace_packages, setup

    setup(
        name="modcalc",
        version="0.1.0",
        packages=find_namespace_packages(include=["src", "src.*", "utils", "utils.*"]),
        install_requires=["python-dotenv>=1.0.0", "sympy>=1.12", "numpy>=1.24.0"],
        python_requires=">=3.8",
    )


if __name__ == "__main__":
    # When invoked by pip/setuptools (setup.py <command>), provide package metadata;
    # a plain `python setup.py [--dev]` runs the bootstrap below.
    if any(not arg.startswith("-") for arg in sys.argv[1:]):
        _packaging_setup()
    else:
        main()
