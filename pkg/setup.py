#!/usr/bin/env python

from setuptools import setup

DESC = ("Nonlocal constants of motion for Lagrangian systems, and the "
        "geodesics of Poincare's half-plane.")

LONG_DESC = open("README.rst").read()

# defines __version__
exec(open("nlcm/version.py").read())

setup(
    name="nlcm",
    version=__version__,
    description=DESC,
    long_description=LONG_DESC,
    author="nlcm developers",
    license="2-clause BSD",
    packages=["nlcm"],
    python_requires=">=3.6",
    install_requires=[
        "six",
        "numpy >= 1.13",
        # cumulative quadrature (cumulative_trapezoid, or cumtrapz before
        # scipy 1.6)
        "scipy >= 1.0",
    ],
    extras_require={
        "test": ["pytest", "coverage"],
    },
    entry_points={
        "console_scripts": ["nlcm = nlcm.cli:main"],
    },
    classifiers =
      [ "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Education",
        "License :: OSI Approved :: BSD License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        ],
)
