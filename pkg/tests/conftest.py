from __future__ import annotations

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qaffine.qlaurent import LaurentPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def laurent(draw, max_terms: int = 5, span: int = 6, coeff: int = 5):
    terms = draw(st.lists(st.tuples(st.integers(-span, span), st.integers(-coeff, coeff)), max_size=max_terms))
    return LaurentPoly(terms)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Print one pass/fail line for an acceptance criterion and keep it for the run summary."""

    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
