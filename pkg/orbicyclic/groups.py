"""Finite groups given by generators acting linearly, monomially on a torus, or on a finite-dimensional algebra.

Monomial torus maps act on (C*)^n by ``(g·t)_i = ζ^g_i · t_{π_g(i)}`` with ζ^g_i = exp(2πi·shift_i).
Composing, ``(g∘h)·t = g·(h·t)`` gives::

    (g∘h).perm[i]  = h.perm[g.perm[i]]
    (g∘h).shift[i] = g.shift[i] + h.shift[g.perm[i]]   (mod 1)

Permutations are 0-based tuples internally and 1-based in configs and reports.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, ClassVar, NamedTuple, Union

from .algebra import FinDimAlgebra
from .exactla import RationalMatrix, SingularMatrix, rank

logger = logging.getLogger(__name__)

DEFAULT_GROUP_LIMIT = 20000


class SizeLimitExceeded(Exception):
    def __init__(self, what: str, size: int, limit: int) -> None:
        super().__init__(f"{what} reached {size}, exceeding the configured limit of {limit}")


class MixedActionKinds(ValueError):
    def __init__(self, kinds: set[str], dims: set[int]) -> None:
        super().__init__(f"Generators must share one action kind and dimension, got kinds {sorted(kinds)} and dimensions {sorted(dims)}")


class CoordinateInversionUnsupported(ValueError):
    def __init__(self, coordinates: Sequence[int]) -> None:
        super().__init__(f"Coordinate inversions t ↦ t⁻¹ are not supported (requested on coordinates {list(coordinates)})")


class InvalidPermutation(ValueError):
    def __init__(self, perm: Sequence[int]) -> None:
        super().__init__(f"{list(perm)} is not a permutation of 0..{len(perm) - 1}")


class ActionKind(Enum):
    LINEAR = "linear"
    TORUS = "torus"
    FINDIM = "findim"


@dataclass(frozen=True, eq=False)
class LinearElement:
    """An invertible matrix acting on C^n."""

    matrix: RationalMatrix
    kind: ClassVar[ActionKind] = ActionKind.LINEAR

    def __post_init__(self) -> None:
        if self.matrix.rows != self.matrix.cols or rank(self.matrix) != self.matrix.rows:
            raise SingularMatrix(self.matrix.shape)

    @classmethod
    def identity(cls, n: int) -> LinearElement:
        return cls(RationalMatrix.identity(n))

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def compose(self, other: LinearElement) -> LinearElement:
        return LinearElement(self.matrix @ other.matrix)

    def identity_like(self) -> LinearElement:
        return LinearElement.identity(self.dim)

    def key(self) -> tuple:
        return (self.kind.value, self.matrix.key())

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "matrix": [[str(v) for v in row] for row in self.matrix.to_rows()]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearElement) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True)
class MonomialElement:
    """t ↦ (ζ_i · t_{π(i)})_i on (C*)^n; shifts live in [0, 1)."""

    perm: tuple[int, ...]
    shift: tuple[Fraction, ...]
    kind: ClassVar[ActionKind] = ActionKind.TORUS

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise InvalidPermutation(self.perm)
        if len(self.shift) != len(self.perm):
            raise ValueError(f"Shift vector has {len(self.shift)} entries but the permutation acts on {len(self.perm)} coordinates")
        object.__setattr__(self, "shift", tuple(Fraction(s) % 1 for s in self.shift))

    @classmethod
    def identity(cls, n: int) -> MonomialElement:
        return cls(tuple(range(n)), (Fraction(0),) * n)

    @classmethod
    def from_config(cls, perm: Sequence[int], shift: Sequence[Any] | None = None, invert: Sequence[bool] | None = None) -> MonomialElement:
        """Build from 1-based images; ``invert`` flags are accepted only to be refused."""
        if invert and any(invert):
            raise CoordinateInversionUnsupported([i + 1 for i, flag in enumerate(invert) if flag])
        zero_based = tuple(int(p) - 1 for p in perm)
        shifts = tuple(Fraction(s) for s in shift) if shift is not None else (Fraction(0),) * len(zero_based)
        return cls(zero_based, shifts)

    @property
    def dim(self) -> int:
        return len(self.perm)

    def compose(self, other: MonomialElement) -> MonomialElement:
        perm = tuple(other.perm[self.perm[i]] for i in range(self.dim))
        shift = tuple(self.shift[i] + other.shift[self.perm[i]] for i in range(self.dim))
        return MonomialElement(perm, shift)

    def identity_like(self) -> MonomialElement:
        return MonomialElement.identity(self.dim)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles of π, each listed from its smallest coordinate, ordered by that coordinate."""
        seen: set[int] = set()
        out: list[tuple[int, ...]] = []
        for start in range(self.dim):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.perm[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.perm[nxt]
            out.append(tuple(cycle))
        return out

    def key(self) -> tuple:
        return (self.kind.value, self.perm, self.shift)

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "perm": [p + 1 for p in self.perm], "shift": [str(s) for s in self.shift]}


@dataclass(frozen=True, eq=False)
class AlgebraAutomorphism:
    """An automorphism of a structure-constant algebra; columns are images of basis elements."""

    matrix: RationalMatrix
    algebra: FinDimAlgebra = field(repr=False)
    kind: ClassVar[ActionKind] = ActionKind.FINDIM

    def __post_init__(self) -> None:
        self.algebra.check_automorphism(self.matrix)

    @classmethod
    def identity(cls, algebra: FinDimAlgebra) -> AlgebraAutomorphism:
        return cls(RationalMatrix.identity(algebra.dim), algebra)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def compose(self, other: AlgebraAutomorphism) -> AlgebraAutomorphism:
        return AlgebraAutomorphism(self.matrix @ other.matrix, self.algebra)

    def identity_like(self) -> AlgebraAutomorphism:
        return AlgebraAutomorphism.identity(self.algebra)

    def key(self) -> tuple:
        return (self.kind.value, self.matrix.key())

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "algebra": self.algebra.name, "matrix": [[str(v) for v in row] for row in self.matrix.to_rows()]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AlgebraAutomorphism) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


GroupElement = Union[LinearElement, MonomialElement, AlgebraAutomorphism]


class ConjugacyClass(NamedTuple):
    representative: int
    members: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A closed list of elements, identity at index 0, with its multiplication table."""

    elements: tuple[GroupElement, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    inverses: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        inverses = []
        for i in range(len(self.elements)):
            inverses.append(next(j for j in range(len(self.elements)) if self.table[i][j] == self.identity))
        object.__setattr__(self, "inverses", tuple(inverses))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def kind(self) -> ActionKind:
        return self.elements[0].kind

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def multiply(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.inverses[i]

    def element_order(self, i: int) -> int:
        k, power = 1, i
        while power != self.identity:
            power = self.table[power][i]
            k += 1
        return k


def close_group(generators: Sequence[GroupElement], limit: int = DEFAULT_GROUP_LIMIT) -> FiniteGroup:
    """Breadth-first closure under right multiplication by the generators."""
    if not generators:
        raise ValueError("close_group needs at least one generator")
    kinds = {g.kind.value for g in generators}
    dims = {g.dim for g in generators}
    if len(kinds) != 1 or len(dims) != 1:
        raise MixedActionKinds(kinds, dims)

    identity = generators[0].identity_like()
    elements: list[GroupElement] = [identity]
    index: dict[tuple, int] = {identity.key(): 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = x.compose(s)
            k = y.key()
            if k in index:
                continue
            index[k] = len(elements)
            elements.append(y)
            queue.append(y)
            if len(elements) > limit:
                raise SizeLimitExceeded("group closure", len(elements), limit)

    table = tuple(tuple(index[a.compose(b).key()] for b in elements) for a in elements)
    logger.debug("closed %s group of order %d on dimension %d", identity.kind.value, len(elements), identity.dim)
    return FiniteGroup(tuple(elements), table)


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Classes in order of their lowest element index, which is also the representative."""
    assigned: dict[int, int] = {}
    classes: list[ConjugacyClass] = []
    for g in range(G.order):
        if g in assigned:
            continue
        members = sorted({G.multiply(G.multiply(h, g), G.inverse(h)) for h in range(G.order)})
        for m in members:
            assigned[m] = len(classes)
        classes.append(ConjugacyClass(g, tuple(members)))
    return classes


def centralizer(G: FiniteGroup, g: int) -> list[int]:
    if not 0 <= g < G.order:
        raise IndexError(f"Element index {g} outside group of order {G.order}")
    return [h for h in range(G.order) if G.multiply(g, h) == G.multiply(h, g)]


__all_errors__ = [
    SizeLimitExceeded,
    MixedActionKinds,
    CoordinateInversionUnsupported,
    InvalidPermutation,
]

__all__ = [
    ActionKind,
    AlgebraAutomorphism,
    ConjugacyClass,
    FiniteGroup,
    GroupElement,
    LinearElement,
    MonomialElement,
    centralizer,
    close_group,
    conjugacy_classes,
    *__all_errors__,
]
