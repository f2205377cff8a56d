import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdict lines after the test report.

    pytest swallows stdout of passing tests, and the verdicts should be
    visible in every run, green or red.
    """
    try:
        from test_acceptance import VERDICTS
    except Exception:
        return
    if VERDICTS:
        terminalreporter.write_sep("=", "acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)
