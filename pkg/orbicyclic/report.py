"""JSON documents and colored terminal tables for homology reports."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import colors as clr

from .crossprod import EmptyFixed, HomologyReport
from .exactla import dim_grid
from .weyl import WeylFormula

logger = logging.getLogger(__name__)


def _table(value: Any, limits: dict[str, int]) -> Any:
    if isinstance(value, dict):
        first_max = limits.get("q_max", limits.get("n_max", 0))
        return dim_grid(value, first_max, limits["D_max"])
    return list(value)


def report_to_dict(report: HomologyReport, command: str, config: dict[str, Any], timings: bool = False) -> dict[str, Any]:
    """{command, config, theory, group, per_class, totals[, timings]} with deterministic content."""
    per_class = []
    for cls in report.classes:
        per_class.append(
            {
                "representative": cls.representative,
                "element": cls.element,
                "size": cls.size,
                "centralizer_order": cls.centralizer_order,
                "fixed_set": cls.fixed_set.describe() if cls.fixed_set is not None else None,
                "tables": {name: _table(value, report.limits) for name, value in cls.tables.items()},
            }
        )
    totals = report.totals
    if isinstance(totals, dict) and report.theory != "classes":
        totals = _table(totals, report.limits)
    doc: dict[str, Any] = {
        "command": command,
        "config": config,
        "theory": report.theory,
        "group": {"order": report.group_order, "kind": report.kind.value, "classes": len(report.classes)},
        "per_class": per_class,
        "totals": totals,
    }
    if report.limits:
        doc["limits"] = dict(report.limits)
    if timings:
        doc["timings"] = {f"g{cls.representative}": round(cls.seconds, 6) for cls in report.classes if cls.seconds is not None}
    return doc


def weyl_to_dict(n: int, formula: WeylFormula, cross_check: bool | None, config: dict[str, Any]) -> dict[str, Any]:
    return {
        "command": "weyl",
        "config": config,
        "n": n,
        "per_lambda": [
            {"partition": list(c.partition.parts), "t": c.t, "HP": list(c.hp), "centralizer": c.centralizer}
            for c in formula.per_lambda
        ],
        "totals": [formula.hp0, formula.hp1],
        "cross_check": cross_check,
    }


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(doc: dict[str, Any], path: Path) -> None:
    path.write_text(dumps(doc), encoding="utf-8")
    logger.info("wrote report to %s", path)


# ── human tables ──────────────────────────────────────────────────────


def _grid_lines(grid: list[list[int]], row_label: str) -> list[str]:
    if not grid:
        return []
    header = "      " + " ".join(f"D={D:<3}" for D in range(len(grid[0])))
    lines = [clr.yellow(header)]
    for i, row in enumerate(grid):
        cells = " ".join(f"{v:<5}" if v else clr.faint(f"{v:<5}") for v in row)
        lines.append(f"  {row_label}={i:<2} {cells}")
    return lines


def _row_label(theory: str) -> str:
    return "n" if theory == "HC" else "q"


def _fixed(cls_fixed: Any) -> str:
    if cls_fixed is None:
        return ""
    text = ", ".join(f"{k}={v}" for k, v in cls_fixed.describe().items())
    return clr.red(text) if isinstance(cls_fixed, EmptyFixed) else text


def format_report(report: HomologyReport) -> str:
    """Render a report as plain text with ansicolors highlights."""
    parts = [clr.green(f"{report.theory}") + f" for a {report.kind.value} group of order {report.group_order}, {len(report.classes)} classes"]
    for cls in report.classes:
        parts.append(f"{clr.green(f'class g{cls.representative}')}  size {cls.size}  |C| = {cls.centralizer_order}  {_fixed(cls.fixed_set)}".rstrip())
        for name, value in cls.tables.items():
            table = _table(value, report.limits)
            if isinstance(value, dict):
                parts.extend(_grid_lines(table, _row_label(name)))
            else:
                parts.append(f"  {name}: {' '.join(map(str, table))}")
    if report.theory != "classes":
        totals = report.totals
        if isinstance(totals, dict):
            parts.append(clr.green("totals"))
            parts.extend(_grid_lines(_table(totals, report.limits), _row_label(report.theory)))
        else:
            parts.append(f"{clr.green('totals')}  {report.theory}: {' '.join(map(str, totals))}")
    return "\n".join(parts)


def format_weyl(n: int, formula: WeylFormula, cross_check: bool | None) -> str:
    parts = [clr.green(f"HP of C[Z^{n} ⋊ S_{n}]") + f", {len(formula.per_lambda)} partitions"]
    for c in formula.per_lambda:
        parts.append(f"  λ={c.partition!s:<12} t={c.t}  |C|={c.centralizer['order']:<4} HP: {c.hp[0]} {c.hp[1]}")
    parts.append(f"{clr.green('totals')}  HP_0 = {formula.hp0}, HP_1 = {formula.hp1}")
    if cross_check is not None:
        parts.append("cross-check: " + (clr.green("agrees") if cross_check else clr.red("DISAGREES")))
    return "\n".join(parts)


__all__ = [
    dumps,
    format_report,
    format_weyl,
    report_to_dict,
    weyl_to_dict,
    write_json,
]
