"""Tests for the orbicyclic command line."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import pytest

from . import cli
from .cli import (
    EXIT_CONFIG,
    EXIT_INVARIANT,
    EXIT_SIZE,
    build_parser,
    cmd_classes,
    cmd_hc,
    cmd_hh,
    cmd_hp,
    cmd_selftest,
    cmd_weyl,
    main,
)
from .config import JobConfig, parse_action, preset
from .selftest import CheckResult


def _ns(**kwargs) -> argparse.Namespace:
    """Create a simple namespace to act like argparse.Namespace."""
    kwargs.setdefault("json", None)
    kwargs.setdefault("timings", False)
    return argparse.Namespace(**kwargs)


def _config(name: str, **kwargs) -> JobConfig:
    return JobConfig(action=parse_action(preset(name), name), **kwargs)


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep the repository's pyproject.toml out of config resolution."""
    monkeypatch.chdir(tmp_path)


# ── handlers ──────────────────────────────────────────────────────────


def test_cli_classes(capsys: pytest.CaptureFixture[str]) -> None:
    """classes for S_3 on C³ → three classes, exit 0."""
    code = cmd_classes(_config("S3-space"), _ns())
    assert code == 0
    out = capsys.readouterr().out
    assert "3 classes" in out
    assert "class g0" in out


def test_cli_hp_writes_json(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """hp --json → document on disk with totals and per-class timings."""
    path = tmp_path / "hp.json"
    code = cmd_hp(_config("S2-torus"), _ns(json=str(path), timings=True))
    assert code == 0
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["totals"] == [2, 2]
    assert doc["config"]["action"]["preset"] == "S2-torus"
    assert set(doc["timings"]) == {"g0", "g1"}
    assert "totals" in capsys.readouterr().out


def test_cli_hh_linear(capsys: pytest.CaptureFixture[str]) -> None:
    code = cmd_hh(_config("S2-plane", q_max=1, D_max=2), _ns())
    assert code == 0
    assert "for a linear group of order 2" in capsys.readouterr().out


def test_cli_hh_findim(tmp_path: Path) -> None:
    """hh on an algebra action goes through the structure-constant bar complex."""
    path = tmp_path / "m2.json"
    code = cmd_hh(_config("M2", q_max=1), _ns(json=str(path)))
    assert code == 0
    assert json.loads(path.read_text(encoding="utf-8"))["totals"] == [1, 0]


def test_cli_hc(tmp_path: Path) -> None:
    path = tmp_path / "hc.json"
    code = cmd_hc(_config("trivial-line", q_max=2, D_max=2), _ns(json=str(path)))
    assert code == 0
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["limits"] == {"n_max": 2, "D_max": 2}
    assert doc["totals"] == [[1, 1, 1], [0, 0, 0], [1, 0, 0]]


def test_cli_weyl(capsys: pytest.CaptureFixture[str]) -> None:
    code = cmd_weyl(JobConfig(), _ns(n=3, cross_check=True))
    assert code == 0
    out = capsys.readouterr().out
    assert "HP_0 = 4, HP_1 = 4" in out
    assert "agrees" in out


def test_cli_weyl_disagreement(monkeypatch: pytest.MonkeyPatch) -> None:
    """A failed cross-check still prints the table, then raises."""
    monkeypatch.setattr(cli, "weyl_cross_check", lambda n, limit: False)
    with pytest.raises(cli.CrossCheckMismatch, match="S_2"):
        cmd_weyl(JobConfig(), _ns(n=2, cross_check=True))


def test_cli_selftest_failure_exit(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    monkeypatch.setattr(cli, "run_selftest", lambda quick: [CheckResult("always", False, 0.0, "Check failed: always")])
    assert cmd_selftest(JobConfig(), _ns(quick=True)) == EXIT_INVARIANT
    assert "0 passed, 1 failed" in capsys.readouterr().out


# ── parser and main ───────────────────────────────────────────────────


def test_parser_flags() -> None:
    args = build_parser().parse_args(["--preset", "S2-plane", "--q-max", "2", "--d-max", "5", "hh"])
    assert (args.preset, args.q_max, args.D_max, args.oracle, args.command) == ("S2-plane", 2, 5, None, "hh")
    args = build_parser().parse_args(["weyl", "--n", "4", "--cross-check"])
    assert (args.n, args.cross_check) == (4, True)


def test_parser_requires_a_command() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_main_ok(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as exc:
        main(["--preset", "Z2-torus-sign", "hp"])
    assert exc.value.code == 0
    assert "HP: 1 1" in capsys.readouterr().out


def test_main_reads_a_config_document(tmp_path: Path) -> None:
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"action": {"preset": "S2-plane"}, "q_max": 1, "D_max": 1}))
    out = tmp_path / "out.json"
    with pytest.raises(SystemExit) as exc:
        main(["--config", str(job), "--json", str(out), "hh"])
    assert exc.value.code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["limits"] == {"q_max": 1, "D_max": 1}


@pytest.mark.parametrize(
    ("argv", "code", "message"),
    [
        (["hp"], EXIT_CONFIG, "Missing required config value"),
        (["--preset", "nope", "hp"], EXIT_CONFIG, "Unknown preset"),
        (["--preset", "M2", "hp"], EXIT_CONFIG, "not available for findim"),
        (["--preset", "S2-torus", "hh"], EXIT_CONFIG, "not available for torus"),
        (["weyl", "--n", "5", "--cross-check"], EXIT_SIZE, "weyl cross-check n"),
        (["--preset", "S2-plane", "--d-max", "40", "--oracle", "hh"], EXIT_SIZE, "bar block"),
    ],
)
def test_main_exit_codes(argv: list[str], code: int, message: str, capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == code
    assert message in capsys.readouterr().err


def test_main_invariant_exit(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    monkeypatch.setattr(cli, "weyl_cross_check", lambda n, limit: False)
    with pytest.raises(SystemExit) as exc:
        main(["weyl", "--n", "2", "--cross-check"])
    assert exc.value.code == EXIT_INVARIANT
    assert "disagrees" in capsys.readouterr().err
