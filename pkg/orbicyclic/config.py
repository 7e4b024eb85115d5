"""Job configuration: defaults, ``[tool.orbicyclic]``, a JSON document, then CLI flags."""

from __future__ import annotations

import json
import logging
import re
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import FinDimAlgebra, algebra_by_name, inner_automorphism
from .exactla import RationalMatrix
from .groups import (
    DEFAULT_GROUP_LIMIT,
    ActionKind,
    AlgebraAutomorphism,
    FiniteGroup,
    LinearElement,
    MonomialElement,
    close_group,
)
from .hochschild import DEFAULT_BLOCK_LIMIT
from .weyl import DEFAULT_WEYL_LIMIT

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

DEFAULT_Q_MAX = 3
DEFAULT_D_MAX = 4


class ConfigError(ValueError):
    pass


class UnknownPreset(ConfigError):
    def __init__(self, name: str) -> None:
        super().__init__(f"Unknown preset {name!r}; available: {', '.join(preset_names())}")


class MissingConfigValue(ConfigError):
    def __init__(self, key: str) -> None:
        super().__init__(f"Missing required config value {key!r}")


class InvalidConfigValue(ConfigError):
    def __init__(self, key: str, value: Any, expected: str) -> None:
        super().__init__(f"Invalid value for {key!r}: {value!r} (expected {expected})")


@dataclass(frozen=True)
class Limits:
    group: int = DEFAULT_GROUP_LIMIT
    block: int = DEFAULT_BLOCK_LIMIT
    weyl: int = DEFAULT_WEYL_LIMIT


@dataclass(frozen=True)
class ActionSpec:
    """A validated group action; ``generators`` keep their raw config form for echoing."""

    kind: ActionKind
    n: int
    generators: tuple[Any, ...]
    algebra: str | None = None
    preset: str | None = None

    def describe(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value, "n": self.n, "generators": list(self.generators)}
        if self.algebra is not None:
            out["algebra"] = self.algebra
        if self.preset is not None:
            out["preset"] = self.preset
        return out


@dataclass(frozen=True)
class JobConfig:
    action: ActionSpec | None = None
    q_max: int = DEFAULT_Q_MAX
    D_max: int = DEFAULT_D_MAX
    oracle: bool = False
    limits: Limits = field(default_factory=Limits)

    def echo(self) -> dict[str, Any]:
        return {
            "action": self.action.describe() if self.action else None,
            "q_max": self.q_max,
            "D_max": self.D_max,
            "oracle": self.oracle,
            "limits": {"group": self.limits.group, "block": self.limits.block, "weyl": self.limits.weyl},
        }


# ── presets ───────────────────────────────────────────────────────────


def _permutation_matrix(images: list[int]) -> list[list[int]]:
    """Matrix sending e_i to e_{images[i]} (0-based)."""
    n = len(images)
    return [[int(images[j] == i) for j in range(n)] for i in range(n)]


def _symmetric_generators(k: int) -> list[list[int]]:
    swap = [1, 0, *range(2, k)]
    rotate = [(i + 1) % k for i in range(k)]
    return [swap, rotate]


def _linear(n: int, *matrices: list[list[Any]]) -> dict[str, Any]:
    return {"kind": "linear", "n": n, "generators": list(matrices)}


def _torus(n: int, *generators: dict[str, Any]) -> dict[str, Any]:
    return {"kind": "torus", "n": n, "generators": list(generators)}


def _azumaya_generators() -> list[list[list[str]]]:
    u1 = RationalMatrix.from_rows([[1, 0], [0, -1]])
    u2 = RationalMatrix.from_rows([[0, 1], [1, 0]])
    return [[[str(v) for v in row] for row in inner_automorphism(2, u).to_rows()] for u in (u1, u2)]


PRESETS: dict[str, Any] = {
    "trivial-line": lambda: _linear(1, [[1]]),
    "Z2-sign-line": lambda: _linear(1, [[-1]]),
    "S2-plane": lambda: _linear(2, [[0, 1], [1, 0]]),
    "Z2-diag-plane": lambda: _linear(2, [[1, 0], [0, -1]]),
    "Z2-neg-plane": lambda: _linear(2, [[-1, 0], [0, -1]]),
    "C3-space": lambda: _linear(3, _permutation_matrix([1, 2, 0])),
    "S3-space": lambda: _linear(3, *(_permutation_matrix(p) for p in _symmetric_generators(3))),
    "S2-torus": lambda: _torus(2, {"perm": [2, 1]}),
    "Z2-torus-sign": lambda: _torus(1, {"perm": [1], "shift": ["1/2"]}),
    "S4-torus": lambda: _torus(4, *({"perm": [i + 1 for i in p]} for p in _symmetric_generators(4))),
    "M2": lambda: {"kind": "findim", "algebra": "M2", "generators": []},
    "M2-azumaya": lambda: {"kind": "findim", "algebra": "M2", "generators": _azumaya_generators()},
}

_FAMILY = re.compile(r"S(\d+)-(torus|space)")


def preset_names() -> list[str]:
    return [*sorted(PRESETS), "S<k>-torus", "S<k>-space"]


def preset(name: str) -> dict[str, Any]:
    """Raw action document for a named preset; ``S<k>-torus`` and ``S<k>-space`` take 2 ≤ k ≤ 6."""
    if name in PRESETS:
        return PRESETS[name]()
    match = _FAMILY.fullmatch(name)
    if match and 2 <= int(match[1]) <= 6:
        k = int(match[1])
        gens = _symmetric_generators(k)
        if match[2] == "torus":
            return _torus(k, *({"perm": [i + 1 for i in p]} for p in gens))
        return _linear(k, *(_permutation_matrix(p) for p in gens))
    raise UnknownPreset(name)


# ── validation ────────────────────────────────────────────────────────


def _int(key: str, value: Any, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InvalidConfigValue(key, value, f"an integer ≥ {minimum}")
    return value


def _rational(key: str, value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InvalidConfigValue(key, value, "an integer or a rational string like '1/2'")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidConfigValue(key, value, "an integer or a rational string like '1/2'") from e


def _matrix(key: str, value: Any, size: int) -> list[list[str]]:
    if not isinstance(value, list) or len(value) != size or any(not isinstance(row, list) or len(row) != size for row in value):
        raise InvalidConfigValue(key, value, f"a {size}×{size} matrix")
    return [[str(_rational(f"{key}[{i}][{j}]", v)) for j, v in enumerate(row)] for i, row in enumerate(value)]


def _torus_generator(key: str, value: Any, n: int) -> dict[str, Any]:
    if not isinstance(value, Mapping) or "perm" not in value:
        raise InvalidConfigValue(key, value, "an object with 'perm' and optional 'shift', 'invert'")
    perm = value["perm"]
    if not isinstance(perm, list) or sorted(perm) != list(range(1, n + 1)):
        raise InvalidConfigValue(f"{key}.perm", perm, f"a permutation of 1..{n}")
    out: dict[str, Any] = {"perm": list(perm)}
    shift = value.get("shift")
    if shift is not None:
        if not isinstance(shift, list) or len(shift) != n:
            raise InvalidConfigValue(f"{key}.shift", shift, f"{n} rationals")
        out["shift"] = [str(_rational(f"{key}.shift[{i}]", s)) for i, s in enumerate(shift)]
    invert = value.get("invert")
    if invert is not None:
        if not isinstance(invert, list) or len(invert) != n or any(not isinstance(f, bool) for f in invert):
            raise InvalidConfigValue(f"{key}.invert", invert, f"{n} booleans")
        out["invert"] = list(invert)
    return out


def parse_action(raw: Any, preset_name: str | None = None) -> ActionSpec:
    if not isinstance(raw, Mapping):
        raise InvalidConfigValue("action", raw, "an object")
    if "preset" in raw:
        return parse_action(preset(raw["preset"]), raw["preset"])
    kind_name = raw.get("kind")
    try:
        kind = ActionKind(kind_name)
    except ValueError as e:
        raise InvalidConfigValue("action.kind", kind_name, "'linear', 'torus' or 'findim'") from e
    generators = raw.get("generators")
    if not isinstance(generators, list):
        raise MissingConfigValue("action.generators")

    algebra = None
    if kind is ActionKind.FINDIM:
        algebra = raw.get("algebra")
        if algebra is None:
            raise MissingConfigValue("action.algebra")
        try:
            n = algebra_by_name(algebra).dim
        except ValueError as e:
            raise InvalidConfigValue("action.algebra", algebra, "'C' or 'M<k>'") from e
    else:
        if "n" not in raw:
            raise MissingConfigValue("action.n")
        n = _int("action.n", raw["n"], 1)
        if not generators:
            raise InvalidConfigValue("action.generators", generators, "at least one generator")

    if kind is ActionKind.TORUS:
        parsed = tuple(_torus_generator(f"action.generators[{i}]", g, n) for i, g in enumerate(generators))
    else:
        parsed = tuple(_matrix(f"action.generators[{i}]", g, n) for i, g in enumerate(generators))
    return ActionSpec(kind, n, parsed, algebra, preset_name)


def parse_config(raw: Mapping[str, Any], base: JobConfig | None = None) -> JobConfig:
    """Overlay a config document on ``base``; unknown keys are rejected."""
    config = base or JobConfig()
    unknown = set(raw) - {"action", "q_max", "D_max", "oracle", "limits"}
    if unknown:
        raise InvalidConfigValue(sorted(unknown)[0], raw[sorted(unknown)[0]], "one of action, q_max, D_max, oracle, limits")
    if "action" in raw:
        config = replace(config, action=parse_action(raw["action"]))
    if "q_max" in raw:
        config = replace(config, q_max=_int("q_max", raw["q_max"], 0))
    if "D_max" in raw:
        config = replace(config, D_max=_int("D_max", raw["D_max"], 0))
    if "oracle" in raw:
        if not isinstance(raw["oracle"], bool):
            raise InvalidConfigValue("oracle", raw["oracle"], "true or false")
        config = replace(config, oracle=raw["oracle"])
    if "limits" in raw:
        limits = raw["limits"]
        if not isinstance(limits, Mapping) or set(limits) - {"group", "block", "weyl"}:
            raise InvalidConfigValue("limits", limits, "an object with keys group, block, weyl")
        config = replace(config, limits=replace(config.limits, **{k: _int(f"limits.{k}", v, 1) for k, v in limits.items()}))
    return config


def load_config(pyproject: Path | None = None) -> dict[str, Any]:
    """Load [tool.orbicyclic] from ./pyproject.toml if it exists."""
    pyproject = pyproject or Path("pyproject.toml")
    if not pyproject.exists():
        return {}
    with pyproject.open("rb") as f:
        data = tomllib.load(f)
    return data.get("tool", {}).get("orbicyclic", {})


def load_json_config(path: Path) -> dict[str, Any]:
    try:
        with path.open() as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InvalidConfigValue("config", raw, "a JSON object")
    return raw


def resolve_config(config_path: Path | None = None, overrides: Mapping[str, Any] | None = None, pyproject: Path | None = None) -> JobConfig:
    """Defaults, then pyproject, then the JSON file, then ``overrides`` (None values skipped)."""
    config = parse_config(load_config(pyproject))
    if config_path is not None:
        config = parse_config(load_json_config(config_path), config)
    flags = {k: v for k, v in (overrides or {}).items() if v is not None}
    if "preset" in flags:
        flags["action"] = {"preset": flags.pop("preset")}
    config = parse_config(flags, config)
    logger.debug("resolved config: %s", config.echo())
    return config


# ── building groups ───────────────────────────────────────────────────


def build_algebra(action: ActionSpec) -> FinDimAlgebra:
    if action.algebra is None:
        raise MissingConfigValue("action.algebra")
    return algebra_by_name(action.algebra)


def build_group(action: ActionSpec, limits: Limits | None = None) -> FiniteGroup:
    """Close the configured generators into a finite group."""
    if action.kind is ActionKind.LINEAR:
        elements = [LinearElement(RationalMatrix.from_rows(g)) for g in action.generators]
    elif action.kind is ActionKind.TORUS:
        elements = [MonomialElement.from_config(g["perm"], g.get("shift"), g.get("invert")) for g in action.generators]
    else:
        algebra = build_algebra(action)
        elements = [AlgebraAutomorphism(RationalMatrix.from_rows(g), algebra) for g in action.generators]
        if not elements:
            elements = [AlgebraAutomorphism.identity(algebra)]
    return close_group(elements, (limits or Limits()).group)


__all_errors__ = [
    ConfigError,
    UnknownPreset,
    MissingConfigValue,
    InvalidConfigValue,
]

__all__ = [
    ActionSpec,
    JobConfig,
    Limits,
    build_algebra,
    build_group,
    load_config,
    load_json_config,
    parse_action,
    parse_config,
    preset,
    preset_names,
    resolve_config,
    *__all_errors__,
]
