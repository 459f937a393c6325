from setuptools import find_packages, setup

setup(
    name="dichotomy-lab",
    version="1.0.0",
    description="Finite-scale stability, NIP and Banach-space dichotomy analysis of evaluation matrices",
    packages=find_packages(exclude=("tests", "tests.*")),
    python_requires=">=3.9",
    install_requires=[
        "python-dotenv>=0.21.1",
        "pyyaml>=6.0.0",
        "configargparse>=1.5.3",
        "numpy>=1.24.2",
        "pandas>=1.5.3",
        "networkx>=3.0",
        "prometheus-client>=0.16.0",
        "python-json-logger>=2.0.7",
    ],
    extras_require={
        "test": ["pytest>=7.2.2", "hypothesis>=6.68.2", "scipy>=1.10.1"],
    },
    entry_points={
        "console_scripts": ["dichotomy-lab=src.cli.main:main"],
    },
)
