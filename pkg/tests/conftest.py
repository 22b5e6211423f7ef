import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_PRIMES = [3, 5, 7, 11, 13]

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = f"criterion {int(m.group(1)):2d} ({m.group(2)})"
    if report.failed:
        _acceptance[key] = "FAIL"
    elif report.when == "call":
        _acceptance.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        terminalreporter.write_line(f"{key}: {_acceptance[key]}")
