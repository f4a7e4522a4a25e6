from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="pathrun",
    version="0.1.0",
    description="Speedrun trajectories of a tile platformer as discrete path integrals",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "examples"]),
    py_modules=["cli"],
    include_package_data=True,
    install_requires=[
        "pydantic>=2.10.6",
        "pydantic_core>=2.27.2",
        "numpy>=1.24.4",
        "scipy>=1.9.3",
        "colorama>=0.4.6",
        "termcolor>=2.5.0",
        "python-dotenv>=1.0.0",
        "tqdm>4"
    ],
    entry_points={
        "console_scripts": [
            "pathrun=cli:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
)
