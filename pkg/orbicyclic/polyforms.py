"""Graded polynomial differential forms on C^m.

A basis form x^α dx_{i1}∧…∧dx_{iq} sits in the graded piece (q, c) with c = |α| and has
total degree c + q. The same (monomial, subset) bases are reused for Koszul blocks, where
the exterior factor is an independent vector space E instead of the cotangent space.

Group elements act on functions by ``α_g(f) = f ∘ g⁻¹``, i.e. by pullback along g⁻¹,
on every graded piece. This one convention is used by every module.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Any

from sympy import QQ
from sympy.polys.rings import ring

from .exactla import RationalMatrix, SingularMatrix, exterior_power, from_qq, rank, to_qq

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Subset = tuple[int, ...]


@cache
def monomials(n_vars: int, degree: int) -> tuple[Monomial, ...]:
    """Exponent vectors of total ``degree``, lexicographically descending (x_0^d first)."""
    if degree < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(n_vars), degree):
        exps = [0] * n_vars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return tuple(sorted(out, reverse=True))


def form_space_dim(m: int, c: int, q: int) -> int:
    """C(m+c−1, c)·C(m, q), the size of the (q, c) piece of Ω(C^m)."""
    if c < 0 or q < 0 or q > m:
        return 0
    if m == 0:
        return 1 if c == 0 else 0
    return comb(m + c - 1, c) * comb(m, q)


@dataclass(frozen=True)
class GradedFormSpace:
    """Span of x^α ⊗ e_I with |α| = c, |I| = q; ``n_ext`` defaults to m (differential forms)."""

    m: int
    c: int
    q: int
    n_ext: int | None = None

    def __post_init__(self) -> None:
        if self.n_ext is None:
            object.__setattr__(self, "n_ext", self.m)

    @cached_property
    def basis(self) -> tuple[tuple[Monomial, Subset], ...]:
        return _basis(self.m, self.n_ext, self.c, self.q)

    @cached_property
    def index(self) -> dict[tuple[Monomial, Subset], int]:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def label(self, i: int) -> str:
        alpha, subset = self.basis[i]
        mono = "·".join(f"x{k}^{a}" if a > 1 else f"x{k}" for k, a in enumerate(alpha) if a) or "1"
        wedge = "∧".join(f"dx{k}" for k in subset)
        return f"{mono} {wedge}".strip()


@cache
def _basis(m: int, n_ext: int, c: int, q: int) -> tuple[tuple[Monomial, Subset], ...]:
    if q < 0 or q > n_ext:
        return ()
    return tuple((alpha, subset) for alpha in monomials(m, c) for subset in combinations(range(n_ext), q))


@dataclass(frozen=True)
class PolyForm:
    space: GradedFormSpace
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.space.dim:
            raise ValueError(f"PolyForm needs {self.space.dim} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_terms(cls, space: GradedFormSpace, terms: Mapping[tuple[Monomial, Subset], Any]) -> PolyForm:
        coeffs = [Fraction(0)] * space.dim
        for basis_element, value in terms.items():
            coeffs[space.index[basis_element]] += from_qq(to_qq(value))
        return cls(space, tuple(coeffs))

    @classmethod
    def from_column(cls, space: GradedFormSpace, column: RationalMatrix) -> PolyForm:
        return cls(space, column.column(0))

    def terms(self) -> dict[tuple[Monomial, Subset], Fraction]:
        return {self.space.basis[i]: v for i, v in enumerate(self.coeffs) if v}

    def as_column(self) -> RationalMatrix:
        return RationalMatrix.from_columns([self.coeffs], self.space.dim)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


# ── de Rham differential ──────────────────────────────────────────────


def wedge_sign(i: int, subset: Subset) -> int:
    """Sign of moving dx_i past the smaller indices of a sorted ``subset``."""
    return -1 if sum(1 for j in subset if j < i) % 2 else 1


@cache
def de_rham_matrix(m: int, c: int, q: int) -> RationalMatrix:
    """d: (q, c) → (q+1, c−1) on Ω(C^m)."""
    source = GradedFormSpace(m, c, q)
    target = GradedFormSpace(m, c - 1, q + 1)
    entries: dict[tuple[int, int], int] = {}
    for col, (alpha, subset) in enumerate(source.basis):
        for i, a in enumerate(alpha):
            if not a or i in subset:
                continue
            lowered = alpha[:i] + (a - 1,) + alpha[i + 1 :]
            row = target.index[lowered, tuple(sorted((*subset, i)))]
            entries[row, col] = entries.get((row, col), 0) + a * wedge_sign(i, subset)
    return RationalMatrix.from_entries(entries, (target.dim, source.dim))


def de_rham_d(omega: PolyForm) -> PolyForm:
    space = omega.space
    d = de_rham_matrix(space.m, space.c, space.q)
    return PolyForm.from_column(GradedFormSpace(space.m, space.c - 1, space.q + 1), d @ omega.as_column())


# ── pullbacks ─────────────────────────────────────────────────────────


class PolynomialPullback:
    """Substitution x_i ↦ Σ_k L[i,k]·u_k for a linear map L: C^m → C^n (an n×m matrix)."""

    def __init__(self, L: RationalMatrix) -> None:
        self.n, self.m = L.shape
        self._cache: dict[Monomial, dict[Monomial, Any]] = {}
        self._images: list[Any] = []
        if self.m:
            self.ring, *gens = ring(f"u0:{self.m}", QQ)
            rows = L.to_rows()
            for i in range(self.n):
                image = self.ring.zero
                for k, v in enumerate(rows[i]):
                    if v:
                        image += to_qq(v) * gens[k]
                self._images.append(image)

    def apply(self, monomial: Monomial) -> dict[Monomial, Any]:
        """The pulled-back polynomial as ``{exponents: QQ}``."""
        cached = self._cache.get(monomial)
        if cached is not None:
            return cached
        if not self.m:
            result = {(): QQ(1)} if not any(monomial) else {}
        else:
            p = self.ring.one
            for i, a in enumerate(monomial):
                if a:
                    p *= self._images[i] ** a
            result = dict(p.items())
        self._cache[monomial] = result
        return result


def pullback_matrix(L: RationalMatrix, c: int, q: int) -> RationalMatrix:
    """Pullback of (q, c) forms along L: C^m → C^n, as a matrix Ω_{(q,c)}(C^n) → Ω_{(q,c)}(C^m)."""
    n, m = L.shape
    source = GradedFormSpace(n, c, q)
    target = GradedFormSpace(m, c, q)
    if not source.dim or not target.dim:
        return RationalMatrix.zeros(target.dim, source.dim)
    pullback = PolynomialPullback(L)
    wedge = exterior_power(L, q)
    source_subsets = {s: k for k, s in enumerate(combinations(range(n), q))}
    target_subsets = list(combinations(range(m), q))
    minors: dict[Subset, list[tuple[Subset, Any]]] = {}
    for subset, row in source_subsets.items():
        minors[subset] = [(target_subsets[j], v) for i, j, v in wedge.items() if i == row]
    entries: dict[tuple[int, int], Any] = {}
    for col, (alpha, subset) in enumerate(source.basis):
        for beta, coeff in pullback.apply(alpha).items():
            for image_subset, minor in minors[subset]:
                row = target.index[beta, image_subset]
                entries[row, col] = entries.get((row, col), QQ(0)) + coeff * minor
    return RationalMatrix.from_entries(entries, (target.dim, source.dim))


def restrict_form(omega: PolyForm, subspace: RationalMatrix) -> PolyForm:
    """Pull ω back along the inclusion of the column span of ``subspace`` (an n×m basis)."""
    if rank(subspace) != subspace.cols:
        raise SingularMatrix(subspace.shape)
    space = omega.space
    restricted = pullback_matrix(subspace, space.c, space.q) @ omega.as_column()
    return PolyForm.from_column(GradedFormSpace(subspace.cols, space.c, space.q), restricted)


def action_on_forms(g: RationalMatrix, c: int, q: int) -> RationalMatrix:
    """Matrix of α_g = pullback along g⁻¹ on the (q, c) piece; a homomorphism in g."""
    return pullback_matrix(g.inverse(), c, q)


__all__ = [
    GradedFormSpace,
    PolyForm,
    PolynomialPullback,
    action_on_forms,
    de_rham_d,
    de_rham_matrix,
    form_space_dim,
    monomials,
    pullback_matrix,
    restrict_form,
    wedge_sign,
]
