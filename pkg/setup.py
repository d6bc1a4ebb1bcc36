"""Setuptools configuration for coresched."""

from setuptools import setup
from setuptools import find_packages


with open('README.rst', 'r') as readmefile:

    README = readmefile.read()

setup(
    name='coresched',
    version='0.1.0',
    description=(
        'Discrete-time simulation and learnability verification for '
        'continual learning task bundles.'
    ),
    author='coresched contributors',
    long_description=README,
    license='MIT',
    packages=find_packages(exclude=['tests', 'build', 'dist', 'docs']),
    install_requires=[
        'numpy',
        'PyYAML',
    ],
    entry_points={
        'console_scripts': [
            'coresched = coresched.cli:main',
        ],
    },
    include_package_data=True,
)
