from __future__ import annotations

import logging
from functools import cache

import pytest

from .groups import SizeLimitExceeded
from .weyl import (
    Partition,
    centralizer_structure,
    cycle_type,
    hp_weyl_formula,
    partitions,
    sigma_lambda,
    symmetric_group_on_torus,
    t_of_lambda,
    weyl_cross_check,
)

# ── partitions ────────────────────────────────────────────────────────


def test_partitions_of_four() -> None:
    parts = [p.parts for p in partitions(4)]
    assert parts == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(partitions(5)) == 7
    assert all(p.n == 6 for p in partitions(6))


@cache
def _count(n: int, largest: int) -> int:
    """Partitions of n with every part ≤ largest."""
    if n == 0:
        return 1
    if largest == 0:
        return 0
    return _count(n, largest - 1) + (_count(n - largest, largest) if largest <= n else 0)


@pytest.mark.parametrize("n", range(1, 16))
def test_partition_count_matches_the_recursion(n: int) -> None:
    found = partitions(n)
    assert len(found) == _count(n, n)
    assert len(set(found)) == len(found)


def test_partitions_need_positive_n() -> None:
    with pytest.raises(ValueError, match="n ≥ 1"):
        partitions(0)


@pytest.mark.parametrize("parts", [(), (0,), (1, 2)])
def test_partition_validation(parts: tuple[int, ...]) -> None:
    with pytest.raises(ValueError, match="Partition parts"):
        Partition(parts)


def test_partition_text_and_multiplicities() -> None:
    lam = Partition((3, 2, 2, 1))
    assert str(lam) == "(3,2,2,1)"
    assert lam.multiplicities() == {3: 1, 2: 2, 1: 1}
    assert t_of_lambda(lam) == 3


# ── block cycles ──────────────────────────────────────────────────────


def test_sigma_lambda_is_block_cycles() -> None:
    assert sigma_lambda(Partition((3, 1))) == (1, 2, 0, 3)
    assert sigma_lambda(Partition((2, 2))) == (1, 0, 3, 2)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_cycle_type_inverts_sigma_lambda(n: int) -> None:
    for lam in partitions(n):
        assert cycle_type(sigma_lambda(lam)) == lam


def test_centralizer_structure() -> None:
    structure = centralizer_structure(Partition((2, 2)))
    assert structure["order"] == 8
    assert structure["cycles"] == [[1, 2], [3, 4]]
    assert structure["Q"] == [{"length": 2, "multiplicity": 2, "permuted_by": "S_2"}]
    assert centralizer_structure(Partition((3, 1))) == {
        "order": 3,
        "Q": [
            {"length": 3, "multiplicity": 1, "permuted_by": "S_1"},
            {"length": 1, "multiplicity": 1, "permuted_by": "S_1"},
        ],
        "cycles": [[1, 2, 3], [4]],
    }


# ── HP ────────────────────────────────────────────────────────────────


@pytest.mark.parametrize(("n", "hp"), [(1, 1), (2, 2), (3, 4), (4, 7), (5, 12)])
def test_hp_formula(n: int, hp: int) -> None:
    formula = hp_weyl_formula(n)
    assert (formula.hp0, formula.hp1) == (hp, hp)


def test_each_partition_contributes_half_the_torus_cohomology() -> None:
    by_partition = {c.partition: c for c in hp_weyl_formula(8).per_lambda}
    contribution = by_partition[Partition((3, 2, 2, 1))]
    assert contribution.t == 3
    assert contribution.hp == (4, 4)
    assert by_partition[Partition((8,))].hp == (1, 1)


def test_symmetric_group_orders() -> None:
    assert symmetric_group_on_torus(1).order == 1
    assert symmetric_group_on_torus(3).order == 6
    assert symmetric_group_on_torus(4).order == 24


def test_cross_check_small(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        assert weyl_cross_check(3)
    assert not caplog.records


def test_cross_check_guard() -> None:
    with pytest.raises(SizeLimitExceeded, match="weyl cross-check"):
        weyl_cross_check(5)


@pytest.mark.slow
def test_cross_check_n4() -> None:
    assert weyl_cross_check(4)
