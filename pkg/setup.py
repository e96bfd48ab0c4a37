from setuptools import find_packages, setup

setup(
    name="MixedPartials",
    version="0.1.0",
    packages=find_packages(),
    install_requires=[
        "numpy>=1.20",
        "pandas>=1.2",
        "scipy>=1.6",
    ],
    entry_points={"console_scripts": ["mixedpartials=mixedpartials.cli:main"]},
)
