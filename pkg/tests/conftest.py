import random
from fractions import Fraction

import pytest
from hypothesis import settings

from zerotemp.potential import LocallyConstantPotential
from zerotemp.sft import Sft, is_irreducible

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def random_irreducible_sft(rng: random.Random, max_d: int = 4) -> Sft:
    while True:
        d = rng.randint(1, max_d)
        rows = [[int(rng.random() < 0.55) for _ in range(d)] for _ in range(d)]
        try:
            sft = Sft(d, rows)
        except ValueError:
            continue
        if is_irreducible(sft):
            return sft


def random_potential(rng: random.Random, sft: Sft, k: int, den: int = 6, span: int = 12) -> LocallyConstantPotential:
    return LocallyConstantPotential.from_function(
        sft, k, lambda w: Fraction(rng.randint(-span, span), rng.randint(1, den)))


@pytest.fixture
def rng():
    return random.Random(20240501)


_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and report.passed):
        return
    number, name = mark.args
    if _CRITERIA.get(number, ("",))[0] != "FAIL":
        _CRITERIA[number] = ("PASS" if report.passed else "FAIL", name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, name = _CRITERIA[number]
        terminalreporter.write_line(f"{status} criterion {number}: {name}")
