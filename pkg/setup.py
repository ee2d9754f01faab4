from setuptools import find_packages, setup
from typing import List


def get_requirements(file_path: str) -> List[str]:
    """This function will return the list of requirements.

    Args:
        file_path (str): Path of the requirements.

    Returns:
        List[str]: List of requirements.
    """
    requirements = list()
    with open(file_path) as f:
        requirements = f.read().splitlines()

    return [r for r in requirements if r and not r.startswith(("pytest", "hypothesis"))]


setup(
    name="polycirc",
    version="0.1.0",
    description="Differentiable polynomial circuits over commutative semirings",
    package_dir={"": "src"},
    packages=find_packages("src"),
    python_requires=">=3.8",
    install_requires=get_requirements("requirements.txt"),
    extras_require={"test": ["pytest>=7.0", "hypothesis>=6.0"]},
    entry_points={"console_scripts": ["polycirc=polycirc.cli:main"]},
)
