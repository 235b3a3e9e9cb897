"""
pytest configuration and fixtures
"""

import os

import pytest

from periodplan import Pencil, Polynomial, SearchProblem, SyntheticOracle, enumerate_fewnomials


FERMAT = "x^4 + y^4 + z^4 + w^4"
V4_EXAMPLE = "x^3*y + x*y^3 + z^3*w + w^4"
DIAGONAL = "2*x^4 + y^4 + z^4 + w^4"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep tests independent of the caller's PERIODPLAN_* settings"""
    for key in list(os.environ):
        if key.startswith("PERIODPLAN_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture(scope="session")
def fermat():
    return Polynomial.parse(FERMAT)


@pytest.fixture(scope="session")
def v4_example():
    return Polynomial.parse(V4_EXAMPLE)


@pytest.fixture(scope="session")
def diagonal_pencil(fermat):
    """Fermat to 2x^4 + y^4 + z^4 + w^4, whose operator is 1 + (4 + 4t) D"""
    return Pencil(fermat, Polynomial.parse(DIAGONAL))


@pytest.fixture(scope="session")
def four_term_vertices():
    """V_4, the 108 smooth 4-term fewnomial quartics"""
    return enumerate_fewnomials(4)


@pytest.fixture(scope="session")
def five_term_vertices():
    """V_5; only requested by slow tests"""
    return enumerate_fewnomials(5, jobs=os.cpu_count() or 1)


@pytest.fixture
def toy_oracle():
    """Three vertices; a-b never finishes, the other two edges cost 1"""
    return SyntheticOracle(
        {("a", "b"): float("inf"), ("a", "c"): 1.0, ("b", "c"): 1.0},
        sleep=False,
    )


@pytest.fixture
def toy_problem(toy_oracle):
    return SearchProblem(
        targets=["a", "b"],
        waypoints=["a", "b", "c"],
        edges=[("a", "b"), ("a", "c"), ("b", "c")],
        budget=30,
        oracle=toy_oracle,
    )


@pytest.fixture
def workdir(tmp_path):
    path = tmp_path / "work"
    path.mkdir()
    return path


def pytest_configure(config):
    """Configure pytest markers"""
    config.addinivalue_line(
        "markers",
        "integration: runs the command-line front end against a workdir"
    )
    config.addinivalue_line(
        "markers",
        "slow: marks tests as slow running"
    )
