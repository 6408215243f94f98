from setuptools import setup, find_packages

setup(
    name="stinespring-dilator",
    version="0.1.0",
    description="Minimal Stinespring representations for CP maps and φ-maps on Hilbert C*-modules",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10",
        "pyyaml>=6.0",
        "jsonschema>=4.0",
    ],
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "stinespring-dilator=stinespring_dilator.cli:main",
        ],
    },
)
