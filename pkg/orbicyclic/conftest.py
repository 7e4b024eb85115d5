from __future__ import annotations

from collections.abc import Callable

import pytest

from .config import build_group, parse_action, preset
from .exactla import RationalMatrix
from .groups import FiniteGroup


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: whole-pipeline scenarios that take more than a few seconds")


@pytest.fixture
def group_for() -> Callable[[str], FiniteGroup]:
    """Build the group of a named preset."""

    def build(name: str) -> FiniteGroup:
        return build_group(parse_action(preset(name), name))

    return build


@pytest.fixture
def swap() -> RationalMatrix:
    return RationalMatrix.from_rows([[0, 1], [1, 0]])


@pytest.fixture
def three_cycle() -> RationalMatrix:
    return RationalMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])


@pytest.fixture
def sign() -> RationalMatrix:
    return RationalMatrix.from_rows([[-1]])
