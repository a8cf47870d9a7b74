from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def v1_model_text() -> str:
    return fixture_text("library_v1_model.puml")


@pytest.fixture(scope="session")
def v1_code_text() -> str:
    return fixture_text("library_v1_code.py")


@pytest.fixture(scope="session")
def drifted_model_text() -> str:
    return fixture_text("library_v1_drifted_model.puml")


@pytest.fixture(scope="session")
def drifted_code_text() -> str:
    return fixture_text("library_v1_drifted_code.py")


@pytest.fixture(scope="session")
def v2_model_text() -> str:
    return fixture_text("library_v2_model.puml")


@pytest.fixture(scope="session")
def v2_code_text() -> str:
    return fixture_text("library_v2_code.py")


@pytest.fixture(scope="session")
def merged_model_text() -> str:
    return fixture_text("library_v2_merged_model.puml")


@pytest.fixture(scope="session")
def merged_code_text() -> str:
    return fixture_text("library_v2_merged_code.py")


@pytest.fixture(scope="session")
def problem_text() -> str:
    return fixture_text("library_problem.txt")


@pytest.fixture(scope="session")
def llm_fixtures_dir() -> Path:
    return FIXTURES / "llm"
