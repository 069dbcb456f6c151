from pathlib import Path

import pytest
from hypothesis import settings

from ddbar import build_complex, load_manifold
from ddbar.scalar import parse_assignment

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "ddbar" / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")

OMEGA_T = (
    "i/2*e(1,-1) + i/4*(1-2*D)/(1-t*conj(t))*e(2,-2) + i/2*e(3,-3)"
    " + i/4*e(1,-2) + i/4*e(2,-1)"
)


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return load_manifold(FIXTURES / name)


def complex_of(name: str, params: str = ""):
    return build_complex(load(name), parse_assignment(params))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
