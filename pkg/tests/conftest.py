from fractions import Fraction

import pytest
from hypothesis import settings
from mpmath import mp

from gfc.diffop import to_theta_form
from gfc.parser import parse_operator

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

OPERATORS = {
    "geometric": ("(1-z)*D - 1", ["1"]),
    "hypergeometric": ("z*(z*D+1/3)*(z*D+2/11) - (z*D-5/6)*(z*D)", ["1"]),
    "algebraic": ("(z^2-6*z+1)*D + (z-3)", ["1"]),
    "log_squared": ("(1-z)^2*D^3 - 3*(1-z)*D^2 + D", ["0", "0", "1"]),
    "apery": (
        "z^2*(1-34*z+z^2)*D^3 + z*(3-153*z+6*z^2)*D^2 + (1-112*z+7*z^2)*D + (z-5)",
        ["1", "5"],
    ),
}

# values of beta used with each operator in the reference constants
REFERENCE_BETAS = {
    "geometric": [Fraction(0), Fraction(1, 2)],
    "hypergeometric": [Fraction(1, 7)],
    "algebraic": [Fraction(3, 5), Fraction(0)],
    "log_squared": [Fraction(1, 12), Fraction(0)],
    "apery": [Fraction(2, 3), Fraction(0)],
}


def op(name):
    return parse_operator(OPERATORS[name][0])


def form(name):
    return to_theta_form(op(name))


def seeds(name):
    return [Fraction(s) for s in OPERATORS[name][1]]


@pytest.fixture(autouse=True)
def _reset_precision():
    saved = mp.prec
    yield
    mp.prec = saved


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
