import pytest
from hypothesis import settings

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def small_fields():
    from drinfeld.fields import make_field
    return [make_field(2, 3), make_field(3, 2), make_field(2, 4, f=2), make_field(5, 1), make_field(3, 3)]


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    """record_criterion(n, ok, detail) stores one summary line for criterion n."""

    def rec(n: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE[n])

    return rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
