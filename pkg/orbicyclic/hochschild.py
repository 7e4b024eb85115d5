"""Graded reduced bar complexes of O[C^n] twisted by a linear automorphism g.

A basis tensor a_0 ⊗ a_1 ⊗ … ⊗ a_q is a tuple of exponent vectors: a_0 has degree ≥ 0 and
every later factor degree ≥ 1 (the quotient by constants). The total degree D = Σ deg a_i is
preserved by every operator here, so each (q, D) block is finite.

Conventions (α_g is pullback along g⁻¹, see ``polyforms``):

    b_g  faces   δ_0 = a_0·α_g(a_1) ⊗ a_2 ⊗ …,  δ_i = … ⊗ a_i a_{i+1} ⊗ …,  δ_q = a_q a_0 ⊗ a_1 ⊗ …
    t_g          (−1)^q α_g(a_q) ⊗ a_0 ⊗ α_g(a_1) ⊗ … ⊗ α_g(a_{q−1})
    s_g          1 ⊗ α_g⁻¹(a_0) ⊗ a_1 ⊗ … ⊗ a_q
    B_g          s_g ∘ Σ_{k=0}^{q} t_g^k, then projected onto ⟨g⟩-invariants

The inverse twist inside s_g is what makes it a contraction of b'_g when g ≠ 1.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cache, cached_property, lru_cache
from itertools import permutations, product
from math import comb, factorial
from typing import Any, Union

from sympy import QQ

from .exactla import (
    DimTable,
    RationalMatrix,
    averaging_projector,
    homology_dim,
    kernel_matrix,
    projected_homology_dim,
)
from .groups import DEFAULT_GROUP_LIMIT, LinearElement, SizeLimitExceeded
from .polyforms import GradedFormSpace, Monomial, PolyForm, PolynomialPullback, monomials

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_LIMIT = 200_000

Poly = dict[Monomial, Any]
Tensor = tuple[Monomial, ...]
LinearLike = Union[RationalMatrix, LinearElement]


def as_matrix(g: LinearLike) -> RationalMatrix:
    return g.matrix if isinstance(g, LinearElement) else g


# ── bases ─────────────────────────────────────────────────────────────


def _degree_splits(D: int, minimums: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not minimums:
        if D == 0:
            yield ()
        return
    head, rest = minimums[0], minimums[1:]
    for d in range(head, D - sum(rest) + 1):
        for tail in _degree_splits(D - d, rest):
            yield (d, *tail)


def _minimums(q: int, last_reduced: bool) -> tuple[int, ...]:
    if q == 0:
        return (0,)
    return (0,) + (1,) * (q - 1) + ((1,) if last_reduced else (0,))


def bar_dim(n: int, q: int, D: int, last_reduced: bool = True) -> int:
    return sum(_count(n, split) for split in _degree_splits(D, _minimums(q, last_reduced)))


def _count(n: int, split: tuple[int, ...]) -> int:
    total = 1
    for d in split:
        total *= comb(n + d - 1, d) if n else int(d == 0)
    return total


@dataclass(frozen=True)
class BarSpace:
    """Basis of the (q, D) block; ``last_reduced=False`` gives the B' spaces with an unreduced last factor."""

    n: int
    q: int
    D: int
    last_reduced: bool = True

    @cached_property
    def basis(self) -> tuple[Tensor, ...]:
        return _bar_basis(self.n, self.q, self.D, self.last_reduced)

    @cached_property
    def index(self) -> dict[Tensor, int]:
        return {t: i for i, t in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def reduced(self) -> tuple[bool, ...]:
        return tuple(m > 0 for m in _minimums(self.q, self.last_reduced))


@cache
def _bar_basis(n: int, q: int, D: int, last_reduced: bool) -> tuple[Tensor, ...]:
    out: list[Tensor] = []
    for split in _degree_splits(D, _minimums(q, last_reduced)):
        out.extend(product(*(monomials(n, d) for d in split)))
    return tuple(out)


def check_block_size(n: int, q_max: int, D_max: int, limit: int = DEFAULT_BLOCK_LIMIT) -> None:
    for q in range(q_max + 1):
        size = bar_dim(n, q, D_max)
        if size > limit:
            raise SizeLimitExceeded(f"bar block (q={q}, D={D_max}) on C^{n}", size, limit)


# ── polynomial helpers ────────────────────────────────────────────────


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _shift(p: Poly, a: Monomial) -> Poly:
    return {_mono_mul(m, a): c for m, c in p.items()}


def _one(a: Monomial) -> Poly:
    return {a: QQ(1)}


class Twist:
    """α_g and α_g⁻¹ on monomials, cached."""

    def __init__(self, g: RationalMatrix) -> None:
        self.g = g
        self.forward = PolynomialPullback(g.inverse())
        self.backward = PolynomialPullback(g)


@lru_cache(maxsize=256)
def twist_for(g: RationalMatrix) -> Twist:
    return Twist(g)


def _assemble(source: BarSpace, target: BarSpace, image: Callable[[Tensor], Iterable[tuple[Any, Sequence[Poly]]]]) -> RationalMatrix:
    """Matrix of a map given on basis tensors as signed tensor products of polynomials.

    Terms with a constant in a reduced position of the target vanish.
    """
    reduced = target.reduced
    index = target.index
    entries: dict[tuple[int, int], Any] = {}
    for col, tensor in enumerate(source.basis):
        for coeff, factors in image(tensor):
            choices = [[(m, c) for m, c in p.items() if not (r and not any(m))] for p, r in zip(factors, reduced)]
            for combo in product(*choices):
                value = coeff
                for _, c in combo:
                    value = value * c
                row = index[tuple(m for m, _ in combo)]
                entries[row, col] = entries.get((row, col), QQ(0)) + value
    return RationalMatrix.from_entries(entries, (target.dim, source.dim))


# ── differentials ─────────────────────────────────────────────────────


def _faces(tw: Twist, tensor: Tensor, last: int) -> Iterator[tuple[int, list[Poly]]]:
    """Faces δ_0 … δ_last of a tensor; δ_q (cyclic) is included when last == q."""
    q = len(tensor) - 1
    a = tensor
    yield 1, [_shift(tw.forward.apply(a[1]), a[0]), *(_one(x) for x in a[2:])]
    for i in range(1, min(last, q - 1) + 1):
        yield (-1) ** i, [*(_one(x) for x in a[:i]), _one(_mono_mul(a[i], a[i + 1])), *(_one(x) for x in a[i + 2 :])]
    if last == q:
        yield (-1) ** q, [_one(_mono_mul(a[q], a[0])), *(_one(x) for x in a[1:q])]


def b_twisted(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """b_g: B_{q,D} → B_{q−1,D}."""
    g = as_matrix(g)
    source = BarSpace(g.rows, q, D)
    if q == 0:
        return RationalMatrix.zeros(0, source.dim)
    tw = twist_for(g)
    return _assemble(source, BarSpace(g.rows, q - 1, D), lambda t: _faces(tw, t, q))


def b_prime_twisted(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """b'_g on the spaces A ⊗ Ā^{⊗(q−1)} ⊗ A, faces δ_0 … δ_{q−1}."""
    g = as_matrix(g)
    source = BarSpace(g.rows, q, D, last_reduced=False)
    if q == 0:
        return RationalMatrix.zeros(0, source.dim)
    tw = twist_for(g)
    return _assemble(source, BarSpace(g.rows, q - 1, D, last_reduced=False), lambda t: _faces(tw, t, q - 1))


def extra_degeneracy(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """s_g: B'_q → B'_{q+1}, a ↦ 1 ⊗ α_g⁻¹(a_0) ⊗ a_1 ⊗ …; contracts b'_g."""
    g = as_matrix(g)
    n = g.rows
    tw = twist_for(g)
    unit = (0,) * n
    return _assemble(
        BarSpace(n, q, D, last_reduced=False),
        BarSpace(n, q + 1, D, last_reduced=False),
        lambda t: [(1, [_one(unit), tw.backward.apply(t[0]), *(_one(x) for x in t[1:])])],
    )


def cyclic_operator(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """t_g on the normalized block B_{q,D}."""
    g = as_matrix(g)
    tw = twist_for(g)
    sign = -1 if q % 2 else 1

    def image(t: Tensor) -> list[tuple[int, list[Poly]]]:
        if q == 0:
            return [(1, [tw.forward.apply(t[0])])]
        return [(sign, [tw.forward.apply(t[q]), _one(t[0]), *(tw.forward.apply(x) for x in t[1:q])])]

    space = BarSpace(g.rows, q, D)
    return _assemble(space, space, image)


def connes_raw(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """s_g ∘ Σ_{k=0}^{q} t_g^k on B_{q,D}, before projecting to invariants."""
    g = as_matrix(g)
    n = g.rows
    t = cyclic_operator(g, q, D)
    power = RationalMatrix.identity(t.rows)
    norm = power
    for _ in range(q):
        power = t @ power
        norm = norm + power
    tw = twist_for(g)
    unit = (0,) * n
    s = _assemble(
        BarSpace(n, q, D),
        BarSpace(n, q + 1, D),
        lambda x: [(1, [_one(unit), tw.backward.apply(x[0]), *(_one(y) for y in x[1:])])],
    )
    return s @ norm


def cyclic_powers(g: LinearLike, limit: int = DEFAULT_GROUP_LIMIT) -> list[RationalMatrix]:
    """[1, g, g², …] up to the order of g."""
    g = as_matrix(g)
    identity = RationalMatrix.identity(g.rows)
    powers = [identity]
    current = g
    while current != identity:
        powers.append(current)
        if len(powers) > limit:
            raise SizeLimitExceeded("order of a linear element", len(powers), limit)
        current = current @ g
    return powers


def averaging_matrix(group: Sequence[RationalMatrix], q: int, D: int) -> RationalMatrix:
    """(1/|C|) Σ_c α_c^{⊗(q+1)} on B_{q,D}."""
    n = group[0].rows
    space = BarSpace(n, q, D)
    mats = []
    for c in group:
        tw = twist_for(c)
        mats.append(_assemble(space, space, lambda t, tw=tw: [(1, [tw.forward.apply(x) for x in t])]))
    return averaging_projector(mats)


def B_twisted(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """B_g: X_q → X_{q+1} with X the ⟨g⟩-invariants, as P_{q+1}·s_g·N·P_q on the full blocks."""
    group = cyclic_powers(g)
    return averaging_matrix(group, q + 1, D) @ connes_raw(g, q, D) @ averaging_matrix(group, q, D)


# ── homology ──────────────────────────────────────────────────────────


def hh_twisted_dims(g: LinearLike, q_max: int, D_max: int, centralizer: Sequence[RationalMatrix] | None = None, limit: int = DEFAULT_BLOCK_LIMIT) -> DimTable:
    """dim HH_q(O[C^n], g) in degree D; with ``centralizer``, the dims of its invariant part."""
    g = as_matrix(g)
    check_block_size(g.rows, q_max + 1, D_max, limit)
    table: DimTable = {}
    for D in range(D_max + 1):
        projectors = [averaging_matrix(centralizer, q, D) for q in range(q_max + 2)] if centralizer else None
        for q in range(q_max + 1):
            d_in, d_out = b_twisted(g, q + 1, D), b_twisted(g, q, D)
            label = f"b_g (q={q}, D={D})"
            if projectors is None:
                table[q, D] = homology_dim(d_in, d_out, label)
            else:
                table[q, D] = projected_homology_dim(d_in, d_out, projectors[q + 1], projectors[q], label)
    logger.debug("hh_twisted_dims on C^%d: %s", g.rows, table)
    return table


def mixed_cyclic_dims(dims: Sequence[int], b: Sequence[RationalMatrix], B: Sequence[RationalMatrix], P: Sequence[RationalMatrix], n_max: int, label: str = "") -> list[int]:
    """Cyclic homology of a mixed complex truncated at length ``len(dims) − 1``.

    ``b[m]``: X_m → X_{m−1} (``b[0]`` unused), ``B[m]``: X_m → X_{m+1} (already projected), ``P[m]``
    the idempotent cutting X_m out of the full block. C_n = X_n ⊕ X_{n−2} ⊕ … with differential b + B.
    """
    top = len(dims) - 1

    def size(m: int) -> int:
        return dims[m] if 0 <= m <= top else 0

    def components(n: int) -> list[int]:
        return [m for m in range(n, -1, -2) if m <= top] if n >= 0 else []

    def total(n: int) -> RationalMatrix:
        cols, rows = components(n), components(n - 1)
        blocks: dict[tuple[int, int], RationalMatrix] = {}
        for cj, m in enumerate(cols):
            for ri, target in enumerate(rows):
                if target == m - 1:
                    blocks[ri, cj] = b[m] @ P[m]
                elif target == m + 1:
                    blocks[ri, cj] = B[m]
        return RationalMatrix.block(blocks, [size(m) for m in rows], [size(m) for m in cols])

    def projector(n: int) -> RationalMatrix:
        ms = components(n)
        return RationalMatrix.block({(k, k): P[m] for k, m in enumerate(ms)}, [size(m) for m in ms], [size(m) for m in ms])

    return [projected_homology_dim(total(n + 1), total(n), projector(n + 1), projector(n), f"{label} HC_{n}") for n in range(n_max + 1)]


def hc_twisted_dims(g: LinearLike, n_max: int, D_max: int, centralizer: Sequence[RationalMatrix] | None = None, limit: int = DEFAULT_BLOCK_LIMIT) -> DimTable:
    """dim HC_n(O[C^n], g) in degree D, built on the ⟨g⟩-invariants (or the centralizer's)."""
    g = as_matrix(g)
    n_vars = g.rows
    group = list(centralizer) if centralizer else cyclic_powers(g)
    check_block_size(n_vars, n_max + 1, D_max, limit)
    table: DimTable = {}
    for D in range(D_max + 1):
        top = min(D, n_max + 1)
        dims = [BarSpace(n_vars, m, D).dim for m in range(top + 1)]
        P = [averaging_matrix(group, m, D) for m in range(top + 1)]
        b = [b_twisted(g, m, D) for m in range(top + 1)]
        B = [P[m + 1] @ connes_raw(g, m, D) @ P[m] for m in range(top)]
        for n, dim in enumerate(mixed_cyclic_dims(dims, b, B, P, n_max, f"twisted (D={D})")):
            table[n, D] = dim
    logger.debug("hc_twisted_dims on C^%d: %s", n_vars, table)
    return table


# ── comparison maps ───────────────────────────────────────────────────


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def kappa_E(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """Antisymmetrization K_{q,D} → B_{q,D}, a ⊗ e_I ↦ Σ_σ sign(σ) a ⊗ x_{I_σ(1)} ⊗ … ."""
    n = as_matrix(g).rows
    source = GradedFormSpace(n, D - q, q)
    target = BarSpace(n, q, D)
    units = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    entries: dict[tuple[int, int], int] = {}
    for col, (alpha, subset) in enumerate(source.basis):
        for order in permutations(range(q)):
            tensor = (alpha, *(units[subset[k]] for k in order))
            entries[target.index[tensor], col] = _permutation_sign(order)
    return RationalMatrix.from_entries(entries, (target.dim, source.dim))


def _partial(p: Poly, k: int) -> Poly:
    out: Poly = {}
    for m, c in p.items():
        if m[k]:
            out[m[:k] + (m[k] - 1,) + m[k + 1 :]] = c * m[k]
    return out


def chkr_chi_matrix(g: LinearLike, q: int, D: int) -> RationalMatrix:
    """χ_g: B_{q,D} → Ω^q_{D−q}(ker(g−1)), a_0 ⊗ … ⊗ a_q ↦ (1/q!) a_0 da_1 … da_q restricted."""
    g = as_matrix(g)
    V = kernel_matrix(g - RationalMatrix.identity(g.rows))
    m = V.cols
    restrict = PolynomialPullback(V)
    source = BarSpace(g.rows, q, D)
    target = GradedFormSpace(m, D - q, q)
    scale = QQ(1, factorial(q))
    entries: dict[tuple[int, int], Any] = {}
    for col, tensor in enumerate(source.basis):
        form: dict[tuple[Monomial, tuple[int, ...]], Any] = {(beta, ()): c for beta, c in restrict.apply(tensor[0]).items()}
        for a in tensor[1:]:
            p = restrict.apply(a)
            differentials = [(k, _partial(p, k)) for k in range(m)]
            grown: dict[tuple[Monomial, tuple[int, ...]], Any] = {}
            for (beta, wedge), c in form.items():
                for k, dp in differentials:
                    if k in wedge or not dp:
                        continue
                    sign = -1 if sum(1 for j in wedge if j > k) % 2 else 1
                    key_wedge = tuple(sorted((*wedge, k)))
                    for gamma, c2 in dp.items():
                        key = (_mono_mul(beta, gamma), key_wedge)
                        grown[key] = grown.get(key, QQ(0)) + sign * c * c2
            form = grown
        for (beta, wedge), c in form.items():
            if c:
                row = target.index[beta, wedge]
                entries[row, col] = entries.get((row, col), QQ(0)) + scale * c
    return RationalMatrix.from_entries(entries, (target.dim, source.dim))


def chkr_chi(g: LinearLike, chain: Sequence[Any], q: int, D: int) -> PolyForm:
    """χ_g applied to a coefficient vector on the (q, D) bar basis."""
    g = as_matrix(g)
    chi = chkr_chi_matrix(g, q, D)
    column = RationalMatrix.from_columns([list(chain)], chi.cols)
    m = kernel_matrix(g - RationalMatrix.identity(g.rows)).cols
    return PolyForm.from_column(GradedFormSpace(m, D - q, q), chi @ column)


__all__ = [
    B_twisted,
    BarSpace,
    as_matrix,
    averaging_matrix,
    b_prime_twisted,
    b_twisted,
    bar_dim,
    check_block_size,
    chkr_chi,
    chkr_chi_matrix,
    connes_raw,
    cyclic_operator,
    cyclic_powers,
    extra_degeneracy,
    hc_twisted_dims,
    hh_twisted_dims,
    kappa_E,
    mixed_cyclic_dims,
]
