import setuptools

with open("version.txt") as f:
    VERSION = f.read().strip()

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

test = ["pytest~=6.2", "pytest-lazy-fixture~=0.6"]


setuptools.setup(
    name="duhive",
    version=VERSION,
    description="Generalized dual-unitary brickwork circuits: hierarchy checks and exact dynamics",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    include_package_data=True,
    package_data={"duhive": ["configs/**.yml"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.7",
        "opt_einsum>=3.3",
        "PyYAML>=5.4",
        "wandb>=0.10.30",
        "pandas>=1.3",
    ],
    extras_require={
        "test": test,
        "all": test,
    },
    entry_points={
        "console_scripts": [
            "duhive_run = duhive.runners.run_config:main",
        ]
    },
)
