# tests/test_directory_structure.py
from pathlib import Path

import pytest

PACKAGES = ["core", "search", "middleware", "harness", "cli"]


@pytest.mark.parametrize("package", ["", *PACKAGES])
def test_source_packages_importable(package):
    """Test every source package directory carries an __init__.py"""
    path = Path("src/minids") / package

    assert (path / "__init__.py").is_file(), f"{path} is not a package"


@pytest.mark.parametrize("package", [*PACKAGES, "integration"])
def test_test_directories_exist(package):
    assert (Path("tests") / package).is_dir()


def test_bundled_dimacs_instances():
    """Test the small DIMACS files the protocol tests rely on are shipped"""
    bundled = {path.name for path in Path("tests/data/dimacs").glob("*.clq")}

    assert {"hamming6-2.clq", "hamming6-4.clq", "johnson8-2-4.clq", "johnson8-4-4.clq"} <= bundled
