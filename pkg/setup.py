#!/usr/bin/env python3
"""
phaseBits Setup Script
Installs dependencies and runs a quick bounds report as a smoke check
"""

import subprocess
import sys


def print_header():
    """Print welcome header."""
    print("=" * 60)
    print("  phaseBits - Setup Script")
    print("  Digital estimation of many phases")
    print("=" * 60)
    print()


def check_python_version():
    """Check if Python version is compatible."""
    print("Checking Python version...")
    if sys.version_info < (3, 8):
        print("Error: Python 3.8 or higher is required.")
        print(f"   Current version: {sys.version}")
        sys.exit(1)
    print(f"Python {sys.version_info.major}.{sys.version_info.minor} detected")
    print()


def install_dependencies():
    """Install required dependencies."""
    print("Installing dependencies...")
    print()

    try:
        subprocess.check_call(
            [sys.executable, "-m", "pip", "install", "-r", "requirements.txt"]
        )
        print()
        print("All dependencies installed successfully!")
        print()
    except subprocess.CalledProcessError:
        print("Error installing dependencies.")
        print("   Please try manually: pip install -r requirements.txt")
        sys.exit(1)


def smoke_check():
    """Print the k=2 bounds table head through the CLI."""
    print("=" * 60)
    print("  Running: main.py bounds --k 2 --upper 10")
    print("=" * 60)
    print()
    subprocess.run([sys.executable, "main.py", "bounds", "--k", "2", "--fixed-n", "10", "--upper", "10"])


def main():
    """Main setup flow."""
    print_header()
    check_python_version()

    try:
        import numpy  # noqa: F401
        import scipy  # noqa: F401
        import click  # noqa: F401

        print("Dependencies already installed")
        print()
    except ImportError:
        install_dependencies()

    smoke_check()


if __name__ == "__main__":
    main()
