#!/usr/bin/env python3
"""
Helion - package setup
Installs the helion package and its command-line entry point
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).parent


def read_requirements():
    """Runtime requirements from requirements.txt (test and dev tools excluded)"""
    runtime = []
    skip = {"pytest", "hypothesis", "black", "flake8", "isort"}
    for line in (HERE / "requirements.txt").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.split("==")[0] not in skip:
            runtime.append(line)
    return runtime


setup(
    name="helion",
    version="1.0.0",
    description="Optimal probe states for detecting hidden targets in scattering media",
    long_description=(HERE / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["helion", "helion.*"]),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest==7.4.3", "hypothesis==6.92.1"]},
    entry_points={"console_scripts": ["helion=helion.main:main"]},
)
