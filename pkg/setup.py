from setuptools import find_packages, setup


with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="powsim",
    version="0.1.0",
    description="Seeded proof-of-work network simulator and experiment harness",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    install_requires=[
        "pydantic~=2.10.6",
        "pydantic-core~=2.27.2",
        "tenacity~=9.0.0",
        "pyyaml~=6.0.2",
        "loguru~=0.7.3",
        "tomli>=2.0.0",
        "django-environ~=0.11.0",
        "numpy>=1.26",
        "scipy>=1.11",
        "networkx>=3.2",
    ],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "powsim=main:main",
        ],
    },
)
