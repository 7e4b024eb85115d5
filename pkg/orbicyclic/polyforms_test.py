from __future__ import annotations

import pytest

from .exactla import RationalMatrix, SingularMatrix, homology_dim
from .polyforms import (
    GradedFormSpace,
    PolyForm,
    action_on_forms,
    de_rham_d,
    de_rham_matrix,
    form_space_dim,
    monomials,
    restrict_form,
    wedge_sign,
)


def _values(omega: PolyForm) -> dict[str, str]:
    return {omega.space.label(i): str(v) for i, v in enumerate(omega.coeffs) if v}


# ── bases ─────────────────────────────────────────────────────────────


def test_monomials_are_descending() -> None:
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomials(3, 0) == ((0, 0, 0),)
    assert monomials(2, -1) == ()


@pytest.mark.parametrize(
    ("m", "c", "q", "dim"),
    [
        (2, 2, 1, 6),
        (3, 1, 2, 9),
        (0, 0, 0, 1),
        (0, 1, 0, 0),
        (2, 1, 3, 0),
        (2, -1, 0, 0),
    ],
)
def test_form_space_dim_matches_basis(m: int, c: int, q: int, dim: int) -> None:
    assert form_space_dim(m, c, q) == dim
    assert GradedFormSpace(m, c, q).dim == dim


def test_labels() -> None:
    space = GradedFormSpace(2, 2, 1)
    assert space.label(0) == "x0^2 dx0"
    assert GradedFormSpace(2, 0, 2).label(0) == "1 dx0∧dx1"
    assert GradedFormSpace(2, 0, 0).label(0) == "1"


def test_polyform_length_is_checked() -> None:
    with pytest.raises(ValueError, match="3 coefficients"):
        PolyForm(GradedFormSpace(2, 2, 0), (1, 2))  # type: ignore[arg-type]


# ── de Rham ───────────────────────────────────────────────────────────


def test_d_of_a_product() -> None:
    omega = PolyForm.from_terms(GradedFormSpace(2, 2, 0), {((1, 1), ()): 1})
    d_omega = de_rham_d(omega)
    assert d_omega.terms() == {((0, 1), (0,)): 1, ((1, 0), (1,)): 1}
    assert _values(d_omega) == {"x1 dx0": "1", "x0 dx1": "1"}


def test_wedge_sign() -> None:
    assert wedge_sign(0, (1, 2)) == 1
    assert wedge_sign(1, (0,)) == -1
    assert wedge_sign(2, (0, 1)) == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_d_squared_vanishes(m: int) -> None:
    for c in range(2, 5):
        for q in range(m):
            assert (de_rham_matrix(m, c - 1, q + 1) @ de_rham_matrix(m, c, q)).is_zero


@pytest.mark.parametrize("m", [1, 2, 3])
def test_polynomial_poincare_lemma(m: int) -> None:
    """Polynomial forms are exact in every positive total degree."""
    for D in range(1, 4):
        for q in range(min(m, D) + 1):
            c = D - q
            assert homology_dim(de_rham_matrix(m, c + 1, q - 1), de_rham_matrix(m, c, q)) == 0


# ── pullbacks ─────────────────────────────────────────────────────────


def test_swap_acts_on_linear_functions(swap: RationalMatrix) -> None:
    assert action_on_forms(swap, 1, 0) == swap
    assert action_on_forms(swap, 0, 2) == RationalMatrix.from_rows([[-1]])


def test_action_is_a_homomorphism(three_cycle: RationalMatrix) -> None:
    transposition = RationalMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    for c, q in [(1, 0), (2, 1), (1, 2)]:
        assert action_on_forms(three_cycle @ transposition, c, q) == action_on_forms(three_cycle, c, q) @ action_on_forms(transposition, c, q)


def test_scaling_acts_by_inverse_powers() -> None:
    doubling = RationalMatrix.from_rows([[2]])
    assert action_on_forms(doubling, 2, 1) == RationalMatrix.from_rows([["1/8"]])


def test_restrict_to_diagonal() -> None:
    omega = PolyForm.from_terms(GradedFormSpace(2, 1, 1), {((1, 0), (1,)): 1})
    restricted = restrict_form(omega, RationalMatrix.from_rows([[1], [1]]))
    assert restricted.space == GradedFormSpace(1, 1, 1)
    assert restricted.terms() == {((1,), (0,)): 1}


def test_restrict_needs_independent_columns() -> None:
    omega = PolyForm.from_terms(GradedFormSpace(2, 1, 0), {((1, 0), ()): 1})
    with pytest.raises(SingularMatrix):
        restrict_form(omega, RationalMatrix.from_rows([[1, 1], [1, 1]]))


@pytest.mark.parametrize(("c", "q"), [(2, 0), (2, 1), (1, 2), (3, 1)])
def test_restriction_commutes_with_d(c: int, q: int) -> None:
    """ι*(dω) = d(ι*ω) on every basis form, for a plane in C³ that is not a coordinate plane."""
    plane = RationalMatrix.from_rows([[1, 0], [1, 1], [0, 2]])
    space = GradedFormSpace(3, c, q)
    for basis_form in space.basis:
        omega = PolyForm.from_terms(space, {basis_form: 1})
        assert restrict_form(de_rham_d(omega), plane) == de_rham_d(restrict_form(omega, plane))
