#!/usr/bin/env python3
"""
Cayley Toolkit Setup Script
Detects the OS, sets up the virtual environment and runs the test and
reference suites
"""

import os
import sys
import subprocess
import platform
from pathlib import Path


def detect_platform():
    """Detect the current platform"""
    system = platform.system().lower()
    if system == "windows":
        return "windows"
    elif system == "darwin":
        return "macos"
    elif system == "linux":
        return "linux"
    else:
        return "unknown"


def check_python_version():
    """Check if Python version is compatible"""
    return sys.version_info >= (3, 9)


def run_command(command, check=True):
    """Run a command and return the result"""
    try:
        result = subprocess.run(command, shell=True, check=check,
                                capture_output=True, text=True)
        return result.returncode == 0, result.stdout, result.stderr
    except subprocess.CalledProcessError as e:
        return False, e.stdout, e.stderr


def create_virtual_environment():
    """Create a virtual environment"""
    print("Creating virtual environment...")

    if os.path.exists("venv"):
        print("Virtual environment already exists")
        return True

    success, stdout, stderr = run_command(f"{sys.executable} -m venv venv")
    if success:
        print("✓ Virtual environment created successfully")
        return True
    print(f"Failed to create virtual environment: {stderr}")
    return False


def get_pip_command():
    """Get the correct pip command for the current platform"""
    if detect_platform() == "windows":
        return "venv\\Scripts\\pip"
    return "venv/bin/pip"


def get_python_command():
    """Get the correct python command for the current platform"""
    if detect_platform() == "windows":
        return "venv\\Scripts\\python"
    return "venv/bin/python"


def install_dependencies(dev=False):
    """Install project dependencies"""
    requirements = "requirements-dev.txt" if dev else "requirements.txt"
    print(f"Installing dependencies from {requirements}...")

    success, stdout, stderr = run_command(f"{get_pip_command()} install -r {requirements}")
    if not success:
        print(f"Failed to install dependencies: {stderr}")
        return False

    print("✓ Dependencies installed successfully")
    return True


def ensure_environment(dev=False):
    if not os.path.exists("venv"):
        print("Virtual environment not found. Creating one...")
        if not create_virtual_environment():
            return False
    return install_dependencies(dev)


def run_tests():
    """Run the pytest suite"""
    print("\n" + "=" * 50)
    print("RUNNING TESTS")
    print("=" * 50)

    if not ensure_environment(dev=True):
        return False
    success, stdout, stderr = run_command(f"{get_python_command()} -m pytest", check=False)
    print(stdout)
    if not success:
        print(stderr)
        return False
    print("✓ All tests passed")
    return True


def run_verify_all():
    """Run every reference suite and keep the report"""
    print("\n" + "=" * 50)
    print("RUNNING REFERENCE SUITES")
    print("=" * 50)

    if not ensure_environment():
        return False
    report = Path("verify-all.json")
    success, stdout, stderr = run_command(
        f"{get_python_command()} main.py --out {report} --record verify-all", check=False)
    print(stdout)
    if not success:
        print(stderr)
        print(f"Reference suites failed; see {report.resolve()}")
        return False
    print(f"✓ Reference suites passed; report at {report.resolve()}")
    return True


def create_run_scripts():
    """Create platform-specific run scripts"""
    if detect_platform() == "windows":
        with open("cayley.bat", "w") as f:
            f.write("@echo off\n")
            f.write("call venv\\Scripts\\activate\n")
            f.write("python main.py %*\n")
        print("✓ Created cayley.bat")
    else:
        with open("cayley.sh", "w") as f:
            f.write("#!/bin/bash\n")
            f.write("source venv/bin/activate\n")
            f.write("python main.py \"$@\"\n")
        os.chmod("cayley.sh", 0o755)
        print("✓ Created cayley.sh")


def main():
    """Main setup function"""
    print("Cayley Toolkit Setup")
    print("=" * 30)

    action = sys.argv[1] if len(sys.argv) > 1 else None
    if action == "test":
        sys.exit(0 if run_tests() else 1)
    if action == "verify":
        sys.exit(0 if run_verify_all() else 1)

    platform_name = detect_platform()
    print(f"Detected platform: {platform_name}")

    if platform_name == "unknown":
        print("Unsupported platform")
        sys.exit(1)

    if not check_python_version():
        print("Please install Python 3.9 or higher")
        sys.exit(1)

    print(f"Python version: {sys.version}")

    if not create_virtual_environment():
        print("Failed to create virtual environment")
        sys.exit(1)

    try:
        if not install_dependencies():
            print("Failed to install dependencies")
            sys.exit(1)
    except Exception as e:
        print(f"Failed to install dependencies: {e}")
        sys.exit(1)

    create_run_scripts()

    print("\n✓ Setup completed successfully!")
    print("\nTo run the toolkit:")
    if platform_name == "windows":
        print("  cayley.bat verify-all")
    else:
        print("  ./cayley.sh verify-all")

    print("\nOther actions:")
    print("  python setup.py test    # Run the pytest suite")
    print("  python setup.py verify  # Run every reference suite and record the report")


if __name__ == "__main__":
    main()
