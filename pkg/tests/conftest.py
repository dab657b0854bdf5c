"""Shared fixtures and the acceptance-line reporter."""

from __future__ import annotations

import pytest

from stratakb import parser as PS

NUMERIC_MODEL = """\
scale mm dimensional

unknown width : mm

relation allowed (mm)
table allowed {
    (2),
    (4),
}

relation bonus (mm) -> mm
table bonus {
    (2) -> 1,
    (4) -> 3,
}

formula fits: allowed(width)
"""

STRUCT_MODEL = """\
scale mm dimensional
scale hue scalar {red, blue}
structure box { depth: mm; tint: hue }

unknown item : box

relation limit (hue) -> mm
table limit {
    (red) -> 10,
    (blue) -> 20,
}

formula under: depth.item <= limit(tint.item)
"""

PICK_TASK = """\
task pick {
    output width
}
"""


@pytest.fixture()
def numeric_model():
    return PS.parse_model(NUMERIC_MODEL)


@pytest.fixture()
def struct_model():
    return PS.parse_model(STRUCT_MODEL)


# --- acceptance reporting ---------------------------------------------------

ACCEPTANCE_LINES: list = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
