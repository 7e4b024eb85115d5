"""Crossed products of structure-constant algebras and their reduced bar complexes.

For A ⋊ Γ the basis vector a_i ⊗ γ has index ``γ·dim(A) + i`` and
(a_i γ)(a_j γ') = a_i·α_γ(a_j) (γγ'). The bar complex of a crossed product splits by the
conjugacy class of γ_0γ_1…γ_q, which every face map and Connes' B preserve.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import product
from typing import Any, NamedTuple

from sympy import QQ

from .algebra import FinDimAlgebra, NotAutomorphism, Vector, add_into
from .exactla import RationalMatrix, homology_dim
from .groups import ActionKind, FiniteGroup, SizeLimitExceeded, conjugacy_classes
from .hochschild import DEFAULT_BLOCK_LIMIT, mixed_cyclic_dims

logger = logging.getLogger(__name__)


class NotAHomomorphism(ValueError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"The action is not a homomorphism: α(g{i})·α(g{j}) ≠ α(g{i}·g{j})")


@dataclass(frozen=True, eq=False)
class CrossedProduct(FinDimAlgebra):
    base: FinDimAlgebra = field(repr=False)
    group: FiniteGroup = field(repr=False)
    grading: tuple[int, ...] = field(repr=False)


class ClassDims(NamedTuple):
    representative: int
    dims: list[int]


class FindimHomology(NamedTuple):
    total: list[int]
    per_class: list[ClassDims] | None


def findim_crossed_product(A: FinDimAlgebra, G: FiniteGroup, action: Mapping[int, RationalMatrix] | None = None) -> CrossedProduct:
    """A ⋊ Γ; ``action`` maps element indices to automorphism matrices and defaults to the elements themselves."""
    if action is None:
        if G.kind is not ActionKind.FINDIM:
            raise NotAutomorphism(A.name, f"a {G.kind.value} group needs an explicit action on the algebra")
        action = {g: G.elements[g].matrix for g in range(G.order)}
    for g in range(G.order):
        A.check_automorphism(action[g])
    for i in range(G.order):
        for j in range(G.order):
            if action[i] @ action[j] != action[G.multiply(i, j)]:
                raise NotAHomomorphism(i, j)

    d = A.dim
    images = [{j: {r: v for r, c, v in action[g].items() if c == j} for j in range(d)} for g in range(G.order)]
    table = []
    for g in range(G.order):
        for i in range(d):
            row = []
            for h in range(G.order):
                gh = G.multiply(g, h)
                for j in range(d):
                    product_in_a = A.multiply({i: QQ(1)}, images[g][j])
                    row.append({gh * d + k: v for k, v in product_in_a.items()})
            table.append(tuple(row))
    algebra = CrossedProduct(
        name=f"{A.name}⋊G{G.order}",
        table=tuple(table),
        unit={G.identity * d + k: v for k, v in A.unit.items()},
        labels=tuple(f"{A.labels[i]}·g{g}" for g in range(G.order) for i in range(d)),
        base=A,
        group=G,
        grading=tuple(g for g in range(G.order) for _ in range(d)),
    )
    algebra.check()
    logger.debug("crossed product %s has dimension %d", algebra.name, algebra.dim)
    return algebra


# ── reduced bar complex ───────────────────────────────────────────────


class ReducedBar:
    """A ⊗ Ā^{⊗q} with Ā = A/C·1 realized on every basis index except the unit's first nonzero coordinate."""

    def __init__(self, A: FinDimAlgebra, limit: int = DEFAULT_BLOCK_LIMIT) -> None:
        self.A = A
        self.limit = limit
        self.pivot = min(A.unit)
        self.reduced = [i for i in range(A.dim) if i != self.pivot]
        self._scale = {k: v / A.unit[self.pivot] for k, v in A.unit.items()}

    def project(self, v: Mapping[int, Any]) -> Vector:
        """v − (v_p/u_p)·u with the pivot coordinate dropped."""
        out = {k: c for k, c in v.items() if k != self.pivot}
        vp = v.get(self.pivot)
        if vp:
            add_into(out, {k: c for k, c in self._scale.items() if k != self.pivot}, -vp)
        return out

    def size(self, q: int) -> int:
        return self.A.dim * len(self.reduced) ** q

    def bases(self, q: int) -> dict[int, list[tuple[int, ...]]]:
        """Basis tuples of B_q keyed by the class of γ_0…γ_q (a single key 0 without grading)."""
        if self.size(q) > self.limit:
            raise SizeLimitExceeded(f"bar space B_{q} of {self.A.name}", self.size(q), self.limit)
        tuples = product(range(self.A.dim), *([self.reduced] * q))
        if not isinstance(self.A, CrossedProduct):
            return {0: list(tuples)}
        G, grading = self.A.group, self.A.grading
        class_of = {m: c for c, cls in enumerate(conjugacy_classes(G)) for m in cls.members}
        out: dict[int, list[tuple[int, ...]]] = {}
        for t in tuples:
            g = G.identity
            for i in t:
                g = G.multiply(g, grading[i])
            out.setdefault(class_of[g], []).append(t)
        return out

    def b(self, source: Sequence[tuple[int, ...]], target: Sequence[tuple[int, ...]]) -> RationalMatrix:
        """Hochschild boundary between two (class) blocks."""
        table = self.A.table
        index = {t: r for r, t in enumerate(target)}
        entries: dict[tuple[int, int], Any] = {}

        def put(col: int, key: tuple[int, ...], value: Any) -> None:
            row = index[key]
            entries[row, col] = entries.get((row, col), QQ(0)) + value

        for col, t in enumerate(source):
            q = len(t) - 1
            if q == 0:
                continue
            for k, v in table[t[0]][t[1]].items():
                put(col, (k, *t[2:]), v)
            for j in range(1, q):
                sign = -1 if j % 2 else 1
                for k, v in self.project(table[t[j]][t[j + 1]]).items():
                    put(col, (*t[:j], k, *t[j + 2 :]), sign * v)
            sign = -1 if q % 2 else 1
            for k, v in table[t[q]][t[0]].items():
                put(col, (k, *t[1:q]), sign * v)
        return RationalMatrix.from_entries(entries, (len(target), len(source)))

    def connes(self, source: Sequence[tuple[int, ...]], target: Sequence[tuple[int, ...]]) -> RationalMatrix:
        """B(a_0 ⊗ … ⊗ a_q) = Σ_i (−1)^{qi} 1 ⊗ a_i ⊗ … ⊗ a_q ⊗ a_0 ⊗ … ⊗ a_{i−1}."""
        index = {t: r for r, t in enumerate(target)}
        entries: dict[tuple[int, int], Any] = {}
        unit = self.A.unit
        for col, t in enumerate(source):
            q = len(t) - 1
            head = self.project({t[0]: QQ(1)})
            for i in range(q + 1):
                sign = -1 if (q * i) % 2 else 1
                for u_index, u in unit.items():
                    for k, v in head.items():
                        rotated = (*t[i:], k, *t[1:i]) if i else (k, *t[1:])
                        key = (u_index, *rotated)
                        row = index[key]
                        entries[row, col] = entries.get((row, col), QQ(0)) + sign * u * v
        return RationalMatrix.from_entries(entries, (len(target), len(source)))


def _classes(bar: ReducedBar, top: int) -> tuple[list[int], list[dict[int, list[tuple[int, ...]]]]]:
    bases = [bar.bases(q) for q in range(top + 1)]
    if isinstance(bar.A, CrossedProduct):
        keys = list(range(len(conjugacy_classes(bar.A.group))))
    else:
        keys = [0]
    return keys, bases


def _representatives(A: FinDimAlgebra) -> list[int]:
    if isinstance(A, CrossedProduct):
        return [c.representative for c in conjugacy_classes(A.group)]
    return [0]


def findim_hh_dims(A: FinDimAlgebra, q_max: int, limit: int = DEFAULT_BLOCK_LIMIT) -> FindimHomology:
    """HH_q for q ≤ q_max from the reduced bar complex, class by class for crossed products."""
    bar = ReducedBar(A, limit)
    keys, bases = _classes(bar, q_max + 1)
    per_class = []
    for key, rep in zip(keys, _representatives(A)):
        blocks = [basis.get(key, []) for basis in bases]
        b = [RationalMatrix.zeros(0, len(blocks[0]))] + [bar.b(blocks[q], blocks[q - 1]) for q in range(1, q_max + 2)]
        dims = [homology_dim(b[q + 1], b[q], f"{A.name} class {key} HH_{q}") for q in range(q_max + 1)]
        logger.info("HH of %s, class of g%d: %s", A.name, rep, dims)
        per_class.append(ClassDims(rep, dims))
    total = [sum(c.dims[q] for c in per_class) for q in range(q_max + 1)]
    return FindimHomology(total, per_class if isinstance(A, CrossedProduct) else None)


def findim_hc_dims(A: FinDimAlgebra, n_max: int, limit: int = DEFAULT_BLOCK_LIMIT) -> FindimHomology:
    """HC_n for n ≤ n_max via Connes' B on the normalized bar complex."""
    bar = ReducedBar(A, limit)
    top = n_max + 1
    keys, bases = _classes(bar, top)
    per_class = []
    for key, rep in zip(keys, _representatives(A)):
        blocks = [basis.get(key, []) for basis in bases]
        dims = [len(block) for block in blocks]
        b = [RationalMatrix.zeros(0, dims[0])] + [bar.b(blocks[m], blocks[m - 1]) for m in range(1, top + 1)]
        B = [bar.connes(blocks[m], blocks[m + 1]) for m in range(top)]
        P = [RationalMatrix.identity(d) for d in dims]
        hc = mixed_cyclic_dims(dims, b, B, P, n_max, f"{A.name} class {key}")
        per_class.append(ClassDims(rep, hc))
    total = [sum(c.dims[n] for c in per_class) for n in range(n_max + 1)]
    return FindimHomology(total, per_class if isinstance(A, CrossedProduct) else None)


__all_errors__ = [
    NotAHomomorphism,
]

__all__ = [
    ClassDims,
    CrossedProduct,
    FindimHomology,
    ReducedBar,
    findim_crossed_product,
    findim_hc_dims,
    findim_hh_dims,
    *__all_errors__,
]
