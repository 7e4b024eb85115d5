"""Finite-dimensional algebras given by rational structure constants."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from sympy import QQ

from .exactla import RationalMatrix, to_qq

logger = logging.getLogger(__name__)

Vector = dict[int, Any]  # sparse coordinates: basis index -> QQ


class NotAssociative(ValueError):
    def __init__(self, name: str, triple: tuple[int, int, int]) -> None:
        i, j, k = triple
        super().__init__(f"Structure constants of {name} are not associative: (e{i}·e{j})·e{k} ≠ e{i}·(e{j}·e{k})")


class NotUnital(ValueError):
    def __init__(self, name: str, index: int) -> None:
        super().__init__(f"The given unit of {name} does not act as identity on basis element e{index}")


class NotAutomorphism(ValueError):
    def __init__(self, name: str, reason: str) -> None:
        super().__init__(f"Matrix is not an automorphism of {name}: {reason}")


def add_into(target: Vector, source: Mapping[int, Any], coeff: Any = 1) -> None:
    """target += coeff·source, dropping cancelled entries."""
    for k, v in source.items():
        value = target.get(k, QQ(0)) + coeff * v
        if value:
            target[k] = value
        else:
            target.pop(k, None)


@dataclass(frozen=True, eq=False)
class FinDimAlgebra:
    """Associative unital algebra; ``table[i][j]`` is the product e_i·e_j as sparse coordinates."""

    name: str
    table: tuple[tuple[Vector, ...], ...]
    unit: Vector
    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.table)

    @classmethod
    def from_structure_constants(cls, name: str, products: Mapping[tuple[int, int], Mapping[int, Any]], unit: Mapping[int, Any], dim: int, labels: Sequence[str] | None = None) -> FinDimAlgebra:
        """Build and validate; absent ``(i, j)`` pairs multiply to zero."""
        table = tuple(tuple({k: to_qq(v) for k, v in products.get((i, j), {}).items() if v} for j in range(dim)) for i in range(dim))
        algebra = cls(
            name=name,
            table=table,
            unit={k: to_qq(v) for k, v in unit.items() if v},
            labels=tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim)),
        )
        algebra.check()
        logger.debug("built algebra %s of dimension %d", name, dim)
        return algebra

    def multiply(self, u: Mapping[int, Any], v: Mapping[int, Any]) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            row = self.table[i]
            for j, b in v.items():
                add_into(out, row[j], a * b)
        return out

    def check(self) -> None:
        """Associativity on all basis triples and two-sided unit laws."""
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.table[i][j]
                for k in range(self.dim):
                    if self.multiply(ij, {k: QQ(1)}) != self.multiply({i: QQ(1)}, self.table[j][k]):
                        raise NotAssociative(self.name, (i, j, k))
        for i in range(self.dim):
            e = {i: QQ(1)}
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise NotUnital(self.name, i)

    def apply(self, matrix: RationalMatrix, v: Mapping[int, Any]) -> Vector:
        """Image of coordinates ``v`` under a linear map whose columns are the images of the basis."""
        out: Vector = {}
        columns = _columns(matrix)
        for j, a in v.items():
            add_into(out, columns.get(j, {}), a)
        return out

    def check_automorphism(self, matrix: RationalMatrix) -> None:
        if matrix.shape != (self.dim, self.dim):
            raise NotAutomorphism(self.name, f"shape {matrix.shape} does not match dimension {self.dim}")
        columns = _columns(matrix)
        if self.apply(matrix, self.unit) != self.unit:
            raise NotAutomorphism(self.name, "the unit is not preserved")
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.apply(matrix, self.table[i][j])
                rhs = self.multiply(columns.get(i, {}), columns.get(j, {}))
                if lhs != rhs:
                    raise NotAutomorphism(self.name, f"image of {self.labels[i]}·{self.labels[j]} is not the product of the images")


def _columns(matrix: RationalMatrix) -> dict[int, Vector]:
    cols: dict[int, Vector] = {}
    for i, j, v in matrix.items():
        cols.setdefault(j, {})[i] = v
    return cols


def matrix_algebra(k: int) -> FinDimAlgebra:
    """M_k on matrix units: e_(a,b) has index a·k + b and e_(a,b)·e_(c,d) = δ_bc e_(a,d)."""
    products = {(a * k + b, b * k + d): {a * k + d: 1} for a in range(k) for b in range(k) for d in range(k)}
    unit = {a * k + a: 1 for a in range(k)}
    labels = [f"E{a + 1}{b + 1}" for a in range(k) for b in range(k)]
    return FinDimAlgebra.from_structure_constants(f"M{k}", products, unit, k * k, labels)


def ground_field() -> FinDimAlgebra:
    return FinDimAlgebra.from_structure_constants("C", {(0, 0): {0: 1}}, {0: 1}, 1, ["1"])


def inner_automorphism(k: int, u: RationalMatrix) -> RationalMatrix:
    """Matrix of a ↦ u·a·u⁻¹ on the matrix-unit basis of M_k."""
    u_inv = u.inverse()
    entries: dict[tuple[int, int], Any] = {}
    for a in range(k):
        for b in range(k):
            unit = RationalMatrix.from_entries({(a, b): 1}, (k, k))
            image = u @ unit @ u_inv
            for i, j, v in image.items():
                entries[i * k + j, a * k + b] = v
    return RationalMatrix.from_entries(entries, (k * k, k * k))


def algebra_by_name(name: str) -> FinDimAlgebra:
    """``"C"`` or ``"M<k>"``."""
    if name == "C":
        return ground_field()
    if name.startswith("M") and name[1:].isdigit() and int(name[1:]) >= 1:
        return matrix_algebra(int(name[1:]))
    raise ValueError(f"Unknown algebra {name!r}; expected 'C' or 'M<k>'")


__all_errors__ = [
    NotAssociative,
    NotUnital,
    NotAutomorphism,
]

__all__ = [
    FinDimAlgebra,
    add_into,
    algebra_by_name,
    ground_field,
    inner_automorphism,
    matrix_algebra,
    *__all_errors__,
]
