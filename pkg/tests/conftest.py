import json
import time
from pathlib import Path

import pytest
from flint import acb, arb
from hypothesis import HealthCheck, settings

from quasielliptic.precision import workprec

settings.register_profile("qe", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qe")

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text(encoding="utf-8"))
FROZEN_TOL = 1e-50  # frozen values carry 60 significant digits
FROZEN_PREC = 256


def frozen_complex(entry) -> acb:
    with workprec(FROZEN_PREC):
        return acb(arb(entry["re"]), arb(entry["im"]))


def frozen_real(text) -> arb:
    with workprec(FROZEN_PREC):
        return arb(text)


def close_to_frozen(ball, frozen, scale=1.0) -> bool:
    """``ball`` overlaps a tiny disk around the frozen value."""
    target = frozen_complex(frozen) if isinstance(frozen, dict) else acb(frozen_real(frozen))
    err = FROZEN_TOL * max(1.0, scale)
    with workprec(FROZEN_PREC):
        return bool((acb(ball) - target).abs_lower() <= err)


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion after the run
# ---------------------------------------------------------------------------

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    title = dict(report.user_properties)["title"]
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, elapsed)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))
            item.user_properties.append(("title", mark.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        verdict, title, elapsed = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title} ({elapsed:.2f} s)")
