import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    # one line per acceptance criterion, appended by tests/test_acceptance.py
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if not config.acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(config.acceptance_lines):
        terminalreporter.write_line(line)
