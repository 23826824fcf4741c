import sys
from pathlib import Path

import pytest

from symboleo_kit.promptgen import PromptAssets

FIXTURES = Path(__file__).parent / "fixtures"
ASSETS = Path(__file__).parents[1] / "src" / "symboleo_kit" / "assets"
SCENARIO_SPECS = {letter: ASSETS / "scenarios" / letter / "spec.symboleo" for letter in "ABC"}


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def assets() -> PromptAssets:
    return PromptAssets.load()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
