from __future__ import annotations

import pytest

from . import selftest
from .selftest import CHECKS, Check, CheckFailed, expect, format_results, run_selftest


def test_check_names_are_unique() -> None:
    names = [c.name for c in CHECKS]
    assert len(names) == len(set(names))
    assert any(c.slow for c in CHECKS)


def test_expect() -> None:
    expect(True, "fine")
    with pytest.raises(CheckFailed, match="Check failed: broken"):
        expect(False, "broken")


def test_quick_suite_passes() -> None:
    results = run_selftest(quick=True)
    assert [r.name for r in results] == [c.name for c in CHECKS if not c.slow]
    failures = [(r.name, r.error) for r in results if not r.ok]
    assert failures == []


def test_failures_are_collected(monkeypatch: pytest.MonkeyPatch) -> None:
    def broken() -> None:
        expect(1 + 1 == 3, "arithmetic")

    monkeypatch.setattr(selftest, "CHECKS", [Check("broken", broken), Check("fine", lambda: None)])
    results = run_selftest()
    assert [r.ok for r in results] == [False, True]
    assert results[0].error == "Check failed: arithmetic"
    text = format_results(results)
    assert "FAIL" in text
    assert "1 passed, 1 failed" in text


def test_unexpected_errors_do_not_stop_the_run(monkeypatch: pytest.MonkeyPatch) -> None:
    """A check that raises anything else is a FAIL and the later checks still run."""

    def boom() -> None:
        raise ValueError("block too large")

    monkeypatch.setattr(selftest, "CHECKS", [Check("ok", lambda: None), Check("boom", boom), Check("after", lambda: None)])
    results = run_selftest()
    assert [(r.name, r.ok) for r in results] == [("ok", True), ("boom", False), ("after", True)]
    assert results[1].error == "ValueError: block too large"
    assert "2 passed, 1 failed" in format_results(results)


def test_every_module_has_an_invariant_check() -> None:
    names = " ".join(c.name for c in CHECKS)
    for topic in ("rank-nullity", "orbit-stabilizer", "de Rham", "exterior basis", "partition enumeration"):
        assert topic in names


@pytest.mark.slow
def test_full_suite_passes() -> None:
    assert all(r.ok for r in run_selftest())
