import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import pytest

from noshow_window.experiments import load_config, run_tables


@pytest.fixture(scope="session")
def default_config():
    return load_config()


@pytest.fixture(scope="session")
def tables_run(default_config, tmp_path_factory):
    """Default reproduction sweep under both delay maps (shared, ~40 s)."""
    return run_tables(default_config, tmp_path_factory.mktemp("tables"))


@pytest.fixture(scope="session")
def default_grid(tables_run):
    return tables_run.grids["slots-over-mu"]


_CRITERIA = {}


@pytest.fixture(scope="session")
def criterion():
    """Record and print one PASS/FAIL line per acceptance criterion."""
    def record(number, ok, detail):
        line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA[number] = line
        print("\n" + line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
