from pathlib import Path

import pytest

from storylex.lexicon import ColumnMap, load_lexicon

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def fixture_lexicon():
    return load_lexicon(DATA / "lexicon.csv",
                        ColumnMap(word="word", aoa="aoa",
                                  concreteness="concreteness", pos="pos"))


def pytest_runtest_logreport(report):
    """One pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {outcome}")
