from __future__ import annotations

import time
import warnings

import pytest
from hypothesis import HealthCheck, settings

from totalvalue.contour import AccuracyWarning

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        yield


ACCEPTANCE: list[tuple[int, str, bool, float, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, title) first, then ``done(detail)``."""
    entry = {}

    def start(number: int, title: str):
        entry.update(number=number, title=title, t0=time.perf_counter())

    def done(detail: str = ""):
        entry["detail"] = detail
        entry["ok"] = True

    yield start, done
    elapsed = time.perf_counter() - entry["t0"]
    outcome = getattr(request.node, "rep_call", None)
    ok = bool(entry.get("ok")) and outcome is not None and outcome.passed
    ACCEPTANCE.append((entry["number"], entry["title"], ok, elapsed, entry.get("detail", "")))


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, ok, elapsed, detail in sorted(ACCEPTANCE):
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title} ({elapsed:.2f} s) {detail}".rstrip())
    passed = sum(1 for entry in ACCEPTANCE if entry[2])
    tr.write_line(f"{passed}/{len(ACCEPTANCE)} acceptance criteria passed")
