from __future__ import annotations

from collections.abc import Callable

import pytest
from sympy import QQ

from .algebra import NotAutomorphism, ground_field, inner_automorphism, matrix_algebra
from .exactla import RationalMatrix
from .findim import CrossedProduct, NotAHomomorphism, ReducedBar, findim_crossed_product, findim_hc_dims, findim_hh_dims
from .groups import AlgebraAutomorphism, FiniteGroup, LinearElement, SizeLimitExceeded, close_group


@pytest.fixture
def z2(sign: RationalMatrix) -> FiniteGroup:
    return close_group([LinearElement(sign)])


@pytest.fixture
def group_algebra_z2(z2: FiniteGroup) -> CrossedProduct:
    """C[Z/2] as C ⋊ Z/2 with the trivial action."""
    return findim_crossed_product(ground_field(), z2, {g: RationalMatrix.identity(1) for g in range(z2.order)})


# ── crossed products ──────────────────────────────────────────────────


def test_group_algebra_structure(group_algebra_z2: CrossedProduct) -> None:
    A = group_algebra_z2
    assert A.dim == 2
    assert A.name == "C⋊G2"
    assert A.labels == ("1·g0", "1·g1")
    assert A.grading == (0, 1)
    assert A.multiply({1: QQ(1)}, {1: QQ(1)}) == {0: QQ(1)}


def test_twisted_multiplication() -> None:
    M2 = matrix_algebra(2)
    flip = AlgebraAutomorphism(inner_automorphism(2, RationalMatrix.from_rows([[0, 1], [1, 0]])), M2)
    G = close_group([flip])
    A = findim_crossed_product(M2, G)
    assert A.dim == 8
    # (1·g1)(E11·g0) = α(E11)·g1 = E22·g1
    one_g1 = {4 + 0: QQ(1), 4 + 3: QQ(1)}
    assert A.multiply(one_g1, {0: QQ(1)}) == {4 + 3: QQ(1)}


def test_linear_group_needs_explicit_action(z2: FiniteGroup) -> None:
    with pytest.raises(NotAutomorphism, match="explicit action"):
        findim_crossed_product(ground_field(), z2)


def test_action_must_be_a_homomorphism(z2: FiniteGroup) -> None:
    stretch = inner_automorphism(2, RationalMatrix.from_rows([[1, 0], [0, 2]]))
    with pytest.raises(NotAHomomorphism, match="not a homomorphism"):
        findim_crossed_product(matrix_algebra(2), z2, {0: RationalMatrix.identity(4), 1: stretch})


# ── reduced bar complex ───────────────────────────────────────────────


def test_projection_modulo_the_unit() -> None:
    bar = ReducedBar(matrix_algebra(2))
    assert bar.pivot == 0
    assert bar.reduced == [1, 2, 3]
    assert bar.project({0: QQ(1)}) == {3: QQ(-1)}
    assert bar.project({0: QQ(1), 3: QQ(1)}) == {}
    assert bar.size(2) == 36


def test_bar_space_guard() -> None:
    with pytest.raises(SizeLimitExceeded, match="B_1"):
        ReducedBar(matrix_algebra(2), limit=10).bases(1)


def test_bases_split_by_class(group_algebra_z2: CrossedProduct) -> None:
    bases = ReducedBar(group_algebra_z2).bases(1)
    # γ₀γ₁ = g1 for 1 ⊗ g1 and the identity for g1 ⊗ g1
    assert bases == {0: [(1, 1)], 1: [(0, 1)]}


# ── homology ──────────────────────────────────────────────────────────


def test_ground_field() -> None:
    assert findim_hh_dims(ground_field(), 2) == ([1, 0, 0], None)
    assert findim_hc_dims(ground_field(), 3).total == [1, 0, 1, 0]


def test_matrix_algebra_is_morita_invariant() -> None:
    assert findim_hh_dims(matrix_algebra(2), 2).total == [1, 0, 0]
    assert findim_hc_dims(matrix_algebra(2), 2).total == [1, 0, 1]


def test_group_algebra_by_class(group_algebra_z2: CrossedProduct) -> None:
    hh = findim_hh_dims(group_algebra_z2, 2)
    assert hh.total == [2, 0, 0]
    assert [c.dims for c in hh.per_class or []] == [[1, 0, 0], [1, 0, 0]]
    assert findim_hc_dims(group_algebra_z2, 2).total == [2, 0, 2]


@pytest.mark.slow
def test_azumaya_crossed_product(group_for: Callable[[str], FiniteGroup]) -> None:
    G = group_for("M2-azumaya")
    result = findim_hh_dims(findim_crossed_product(G.elements[0].algebra, G), 1)
    assert result.total == [1, 0]
    per_class = {c.representative: c.dims for c in result.per_class or []}
    assert per_class[G.identity] == [1, 0]
    assert all(dims == [0, 0] for rep, dims in per_class.items() if rep != G.identity)
