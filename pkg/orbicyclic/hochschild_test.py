from __future__ import annotations

import pytest

from .exactla import RationalMatrix
from .groups import LinearElement, SizeLimitExceeded
from .hochschild import (
    B_twisted,
    BarSpace,
    b_prime_twisted,
    b_twisted,
    bar_dim,
    check_block_size,
    chkr_chi,
    chkr_chi_matrix,
    cyclic_operator,
    cyclic_powers,
    extra_degeneracy,
    hc_twisted_dims,
    hh_twisted_dims,
    kappa_E,
    mixed_cyclic_dims,
)
from .polyforms import form_space_dim

# ── bases ─────────────────────────────────────────────────────────────


def test_bar_dims() -> None:
    assert bar_dim(1, 0, 3) == 1
    assert bar_dim(1, 1, 3) == 3
    assert bar_dim(2, 1, 1) == 2
    assert bar_dim(1, 1, 0) == 0
    assert BarSpace(2, 2, 3).dim == bar_dim(2, 2, 3)
    # an unreduced last factor also admits constants
    assert BarSpace(1, 1, 1, last_reduced=False).dim == 2


def test_block_guard() -> None:
    check_block_size(2, 2, 3)
    with pytest.raises(SizeLimitExceeded, match="bar block"):
        check_block_size(2, 2, 3, limit=5)


def test_cyclic_powers(three_cycle: RationalMatrix) -> None:
    powers = cyclic_powers(LinearElement(three_cycle))
    assert len(powers) == 3
    assert powers[0] == RationalMatrix.identity(3)
    assert powers[2] == three_cycle @ three_cycle


# ── operators ─────────────────────────────────────────────────────────


@pytest.mark.parametrize("name", ["sign", "swap"])
def test_b_squared_vanishes(name: str, request: pytest.FixtureRequest) -> None:
    g: RationalMatrix = request.getfixturevalue(name)
    for D in range(4):
        for q in range(1, 4):
            assert (b_twisted(g, q, D) @ b_twisted(g, q + 1, D)).is_zero


def test_extra_degeneracy_contracts_b_prime(swap: RationalMatrix) -> None:
    for D in range(3):
        for q in range(1, 3):
            homotopy = b_prime_twisted(swap, q + 1, D) @ extra_degeneracy(swap, q, D) + extra_degeneracy(swap, q - 1, D) @ b_prime_twisted(swap, q, D)
            assert homotopy == RationalMatrix.identity(homotopy.rows)


def test_cyclic_operator_in_degree_zero_is_the_twist(swap: RationalMatrix) -> None:
    assert cyclic_operator(swap, 0, 1) == swap
    assert cyclic_operator(RationalMatrix.identity(1), 1, 2) == RationalMatrix.from_rows([[0, 0], [0, -1]])


def _image(M: RationalMatrix, source: BarSpace, target: BarSpace, tensor: tuple) -> dict[tuple, object]:
    column = M.column(source.index[tensor])
    return {target.basis[i]: v for i, v in enumerate(column) if v}


def test_b_with_the_sign_on_x_tensor_x(sign: RationalMatrix) -> None:
    """b_g(x ⊗ x) = x·α_g(x) − x·x = −2x² for g = −1."""
    assert _image(b_twisted(sign, 1, 2), BarSpace(1, 1, 2), BarSpace(1, 0, 2), ((1,), (1,))) == {((2,),): -2}
    assert _image(b_twisted(RationalMatrix.identity(1), 1, 2), BarSpace(1, 1, 2), BarSpace(1, 0, 2), ((1,), (1,))) == {}


def test_b_prime_on_one_tensor_x_tensor_x() -> None:
    """b'(1 ⊗ x ⊗ x) = x ⊗ x − 1 ⊗ x²."""
    source, target = BarSpace(1, 2, 2, last_reduced=False), BarSpace(1, 1, 2, last_reduced=False)
    image = _image(b_prime_twisted(RationalMatrix.identity(1), 2, 2), source, target, ((0,), (1,), (1,)))
    assert image == {((1,), (1,)): 1, ((0,), (2,)): -1}


def test_cyclic_operator_twists_every_moved_factor(swap: RationalMatrix) -> None:
    """t_g(x0 ⊗ x1 ⊗ x1) = α_g(x1) ⊗ x0 ⊗ α_g(x1) = x0 ⊗ x0 ⊗ x0 for the swap."""
    space = BarSpace(2, 2, 3)
    assert _image(cyclic_operator(swap, 2, 3), space, space, ((1, 0), (0, 1), (0, 1))) == {((1, 0), (1, 0), (1, 0)): 1}


def test_connes_operator_is_a_differential(swap: RationalMatrix) -> None:
    for q in range(2):
        assert (B_twisted(swap, q + 1, 2) @ B_twisted(swap, q, 2)).is_zero
        anti = b_twisted(swap, q + 1, 2) @ B_twisted(swap, q, 2)
        if q:
            anti = anti + B_twisted(swap, q - 1, 2) @ b_twisted(swap, q, 2)
        assert anti.is_zero


# ── homology ──────────────────────────────────────────────────────────


def test_hkr_for_the_line() -> None:
    dims = hh_twisted_dims(RationalMatrix.identity(1), 2, 3)
    assert [dims[0, D] for D in range(4)] == [1, 1, 1, 1]
    assert [dims[1, D] for D in range(4)] == [0, 1, 1, 1]
    assert [dims[2, D] for D in range(4)] == [0, 0, 0, 0]


def test_twisted_hkr_for_the_swap(swap: RationalMatrix) -> None:
    dims = hh_twisted_dims(swap, 2, 3)
    assert dims == {(q, D): form_space_dim(1, D - q, q) for q in range(3) for D in range(4)}


def test_isolated_fixed_point(sign: RationalMatrix) -> None:
    dims = hh_twisted_dims(sign, 2, 3)
    assert dims[0, 0] == 1
    assert sum(dims.values()) == 1


def test_centralizer_invariants(swap: RationalMatrix) -> None:
    dims = hh_twisted_dims(RationalMatrix.identity(2), 1, 2, centralizer=[RationalMatrix.identity(2), swap])
    assert dims[0, 2] == 2
    assert dims[1, 1] == 1


def test_cyclic_homology_of_the_line() -> None:
    dims = hc_twisted_dims(RationalMatrix.identity(1), 2, 3)
    assert [dims[0, D] for D in range(4)] == [1, 1, 1, 1]
    assert [dims[1, D] for D in range(4)] == [0, 0, 0, 0]
    assert [dims[2, D] for D in range(4)] == [1, 0, 0, 0]


def test_mixed_complex_of_a_point() -> None:
    point = mixed_cyclic_dims([1], [RationalMatrix.zeros(0, 1)], [], [RationalMatrix.identity(1)], 3)
    assert point == [1, 0, 1, 0]


# ── comparison maps ───────────────────────────────────────────────────


def test_antisymmetrization_terms() -> None:
    kappa = kappa_E(RationalMatrix.identity(2), 2, 2)
    target = BarSpace(2, 2, 2)
    assert kappa.shape == (target.dim, 1)
    assert kappa.entry(target.index[(0, 0), (1, 0), (0, 1)], 0) == 1
    assert kappa.entry(target.index[(0, 0), (0, 1), (1, 0)], 0) == -1


@pytest.mark.parametrize(("q", "D"), [(1, 2), (2, 2), (2, 3)])
def test_chi_inverts_antisymmetrization(q: int, D: int) -> None:
    identity = RationalMatrix.identity(2)
    composite = chkr_chi_matrix(identity, q, D) @ kappa_E(identity, q, D)
    assert composite == RationalMatrix.identity(composite.rows)


def test_chi_restricts_to_the_fixed_line(swap: RationalMatrix) -> None:
    # x0 ⊗ x1 restricted to the diagonal is u du
    space = BarSpace(2, 1, 2)
    chain = [0] * space.dim
    chain[space.index[(1, 0), (0, 1)]] = 1
    form = chkr_chi(swap, chain, 1, 2)
    assert form.terms() == {((1,), (0,)): 1}
