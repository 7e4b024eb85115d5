from __future__ import annotations

import os
from collections.abc import Iterable

import pytest
from pytest_benchmark.fixture import BenchmarkFixture

from .exactla import RationalMatrix, rank
from .hochschild import b_twisted, hh_twisted_dims
from .weyl import hp_weyl_formula


@pytest.fixture
def benchmark(benchmark: BenchmarkFixture) -> Iterable[BenchmarkFixture]:
    """Pin the benchmark to one core when the platform allows it."""
    if not hasattr(os, "sched_setaffinity"):
        yield benchmark
        return
    old = os.sched_getaffinity(0)
    os.sched_setaffinity(0, {min(old)})
    os.sched_yield()
    yield benchmark
    os.sched_setaffinity(0, old)


def test_rank__benchmark(benchmark: BenchmarkFixture) -> None:
    b = b_twisted(RationalMatrix.identity(2), 2, 4)
    benchmark(rank, b)


def test_twisted_hh__benchmark(benchmark: BenchmarkFixture, three_cycle: RationalMatrix) -> None:
    def run() -> None:
        hh_twisted_dims(three_cycle, 1, 3)

    benchmark(run)


def test_weyl_formula__benchmark(benchmark: BenchmarkFixture) -> None:
    result = benchmark(hp_weyl_formula, 8)
    assert result.hp0 == result.hp1
