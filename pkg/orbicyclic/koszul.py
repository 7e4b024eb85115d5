"""Koszul complexes K_*(R, E, f) with R = O[C^n] and f: E → R of degree ≤ 1.

``f`` is stored as an e×(n+1) matrix: column 0 holds constants, column l+1 the coefficient
of x_l. The block K_{j,D} is spanned by x^α ⊗ e_I with |I| = j and |α| = D − j, so every
exterior generator carries degree 1 and a homogeneous f preserves D.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy import QQ

from .exactla import CompositionNotZero, DimTable, InvariantViolation, RationalMatrix, homology_dim, rank
from .polyforms import GradedFormSpace, Monomial, Subset, form_space_dim

logger = logging.getLogger(__name__)


class InhomogeneousKoszulMap(ValueError):
    def __init__(self) -> None:
        super().__init__("f has constant terms, so the Koszul differential does not preserve the internal degree; use the filtered homology instead")


class HypothesisViolated(ValueError):
    def __init__(self, rank_h: int, rank_h2: int) -> None:
        super().__init__(f"g−1 is not injective on the complement of its kernel: rank(g−1) = {rank_h} but rank((g−1)²) = {rank_h2}")


class RestrictionMismatch(InvariantViolation):
    def __init__(self, key: tuple[int, int], got: int, expected: int) -> None:
        j, D = key
        super().__init__(f"Koszul homology at (j={j}, D={D}) is {got}, but forms on the fixed subspace give {expected}")


@dataclass
class KoszulComplex:
    n: int
    f: RationalMatrix
    D_max: int
    _blocks: dict[tuple[int, int], RationalMatrix] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.f.cols != self.n + 1:
            raise ValueError(f"f must be an e×{self.n + 1} matrix (constant column plus one column per variable), got {self.f.rows}×{self.f.cols}")

    @property
    def e(self) -> int:
        return self.f.rows

    @property
    def homogeneous(self) -> bool:
        return all(j != 0 for _, j, _ in self.f.items())

    def space(self, j: int, D: int) -> GradedFormSpace:
        return GradedFormSpace(self.n, D - j, j, n_ext=self.e)

    def _terms(self, j: int, D: int) -> Iterator[tuple[int, int, tuple[Monomial, Subset], Any]]:
        """(source column, target degree, target basis element, coefficient) of ∂ on K_{j,D}."""
        rows: dict[int, list[tuple[int, Any]]] = {}
        for i, col, v in self.f.items():
            rows.setdefault(i, []).append((col, v))
        for source_col, (alpha, subset) in enumerate(self.space(j, D).basis):
            for k, i in enumerate(subset):
                sign = -1 if k % 2 else 1
                rest = subset[:k] + subset[k + 1 :]
                for col, v in rows.get(i, ()):
                    if col == 0:
                        yield source_col, D - 1, (alpha, rest), sign * v
                    else:
                        raised = alpha[: col - 1] + (alpha[col - 1] + 1,) + alpha[col:]
                        yield source_col, D, (raised, rest), sign * v

    def differential(self, j: int, D: int) -> RationalMatrix:
        """∂: K_{j,D} → K_{j−1,D}; zero maps at the ends of the complex."""
        if not self.homogeneous:
            raise InhomogeneousKoszulMap()
        source = self.space(j, D)
        if j <= 0 or j > self.e:
            return RationalMatrix.zeros(self.space(j - 1, D).dim if j > 0 else 0, source.dim)
        cached = self._blocks.get((j, D))
        if cached is not None:
            return cached
        target = self.space(j - 1, D)
        entries: dict[tuple[int, int], Any] = {}
        for col, _, element, v in self._terms(j, D):
            row = target.index[element]
            entries[row, col] = entries.get((row, col), QQ(0)) + v
        block = RationalMatrix.from_entries(entries, (target.dim, source.dim))
        self._blocks[j, D] = block
        return block

    def filtered_differential(self, j: int, D: int) -> RationalMatrix:
        """∂ on the subcomplex F_{≤D} = ⊕_{D' ≤ D} K_{·,D'}; valid for inhomogeneous f."""
        row_sizes = [self.space(j - 1, d).dim if j > 0 else 0 for d in range(D + 1)]
        col_sizes = [self.space(j, d).dim for d in range(D + 1)]
        if j <= 0 or j > self.e:
            return RationalMatrix.zeros(sum(row_sizes), sum(col_sizes))
        blocks: dict[tuple[int, int], dict[tuple[int, int], Any]] = {}
        for d in range(D + 1):
            for col, target_degree, element, v in self._terms(j, d):
                row = self.space(j - 1, target_degree).index[element]
                entries = blocks.setdefault((target_degree, d), {})
                entries[row, col] = entries.get((row, col), QQ(0)) + v
        matrices = {key: RationalMatrix.from_entries(entries, (row_sizes[key[0]], col_sizes[key[1]])) for key, entries in blocks.items()}
        return RationalMatrix.block(matrices, row_sizes, col_sizes)


def build_koszul(n: int, f: RationalMatrix | Sequence[Sequence[Any]], D_max: int) -> KoszulComplex:
    """Assemble every block j ≤ e, D ≤ D_max and verify ∂² = 0."""
    if not isinstance(f, RationalMatrix):
        f = RationalMatrix.from_rows(f, cols=n + 1)
    K = KoszulComplex(n, f, D_max)
    for D in range(D_max + 1):
        for j in range(2, K.e + 1):
            if K.homogeneous:
                outer, inner = K.differential(j - 1, D), K.differential(j, D)
            else:
                outer, inner = K.filtered_differential(j - 1, D), K.filtered_differential(j, D)
            if not (outer @ inner).is_zero:
                raise CompositionNotZero(inner.shape, outer.shape, f"Koszul block (j={j}, D={D})")
    logger.debug("built Koszul complex n=%d e=%d up to D=%d", n, K.e, D_max)
    return K


def koszul_homology_dims(K: KoszulComplex, D_max: int) -> DimTable:
    """Graded homology dims, keyed by (j, D)."""
    table: DimTable = {}
    for D in range(D_max + 1):
        for j in range(K.e + 1):
            table[j, D] = homology_dim(K.differential(j + 1, D), K.differential(j, D), f"Koszul (j={j}, D={D})")
    return table


def koszul_filtered_homology_dims(K: KoszulComplex, D_max: int) -> DimTable:
    """Homology of the degree ≤ D subcomplexes, for f with constant terms."""
    table: DimTable = {}
    for D in range(D_max + 1):
        for j in range(K.e + 1):
            table[j, D] = homology_dim(K.filtered_differential(j + 1, D), K.filtered_differential(j, D), f"filtered Koszul (j={j}, D≤{D})")
    return table


def koszul_kunneth_check(K1: KoszulComplex, K2: KoszulComplex, D_max: int) -> bool:
    """Compare the homology of K1 ⊗ K2 with the convolution of the factors' tables."""
    n = K1.n + K2.n
    entries: dict[tuple[int, int], Any] = {}
    for i, col, v in K1.f.items():
        entries[i, col] = v
    for i, col, v in K2.f.items():
        entries[K1.e + i, col if col == 0 else K1.n + col] = v
    combined = build_koszul(n, RationalMatrix.from_entries(entries, (K1.e + K2.e, n + 1)), D_max)

    h1, h2 = koszul_homology_dims(K1, D_max), koszul_homology_dims(K2, D_max)
    h = koszul_homology_dims(combined, D_max)
    for (j, D), dim in h.items():
        expected = sum(h1[j1, D1] * h2.get((j - j1, D - D1), 0) for (j1, D1) in h1 if j1 <= j and D1 <= D)
        if dim != expected:
            logger.info("Künneth mismatch at (j=%d, D=%d): %d vs %d", j, D, dim, expected)
            return False
    return True


def koszul_for_element(g: RationalMatrix, D_max: int) -> KoszulComplex:
    """f(e_i) = α_g(x_i) − x_i, i.e. the linear part is g⁻¹ − 1."""
    n = g.rows
    h = g.inverse() - RationalMatrix.identity(n)
    entries = {(i, j + 1): v for i, j, v in h.items()}
    return build_koszul(n, RationalMatrix.from_entries(entries, (n, n + 1)), D_max)


def check_restriction_hypothesis(g: RationalMatrix) -> int:
    """Return dim ker(g−1) after checking g−1 is injective on the complement of its kernel."""
    h = g - RationalMatrix.identity(g.rows)
    rank_h, rank_h2 = rank(h), rank(h @ h)
    if rank_h != rank_h2:
        raise HypothesisViolated(rank_h, rank_h2)
    return g.rows - rank_h


def koszul_restriction_dims(g: RationalMatrix, D_max: int) -> DimTable:
    """Forms on ker(g−1), checked against the Koszul homology of f = α_g − 1."""
    m = check_restriction_hypothesis(g)
    expected: DimTable = {(j, D): form_space_dim(m, D - j, j) for D in range(D_max + 1) for j in range(g.rows + 1)}
    got = koszul_homology_dims(koszul_for_element(g, D_max), D_max)
    for key, dim in expected.items():
        if got[key] != dim:
            raise RestrictionMismatch(key, got[key], dim)
    return expected


__all_errors__ = [
    InhomogeneousKoszulMap,
    HypothesisViolated,
    RestrictionMismatch,
]

__all__ = [
    KoszulComplex,
    build_koszul,
    check_restriction_hypothesis,
    koszul_filtered_homology_dims,
    koszul_for_element,
    koszul_homology_dims,
    koszul_kunneth_check,
    koszul_restriction_dims,
    *__all_errors__,
]
