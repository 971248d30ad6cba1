import random

import pytest
from hypothesis import settings

settings.register_profile("lndkit", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("lndkit")


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for report in terminalreporter.stats.get(status, []):
            if report.when != "call":
                continue
            lines += [value for key, value in report.user_properties if key == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
