import os

import pytest
from hypothesis import HealthCheck, settings

from skkcalc import catalog, corpus
from skkcalc.skk import SkkEngine

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def bundle():
    return catalog.load()


@pytest.fixture(scope="session")
def engine(bundle):
    return SkkEngine(bundle)


@pytest.fixture(scope="session")
def load():
    return corpus.load


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, whatever the verbosity."""
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                rows.append((props["criterion"], outcome.upper()[:4], props.get("seconds")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, mark, secs in sorted(rows, key=lambda r: int(r[0].split(".")[0])):
        timing = f" [{secs:.2f}s]" if secs is not None else ""
        terminalreporter.write_line(f"{mark} criterion {label}{timing}")
