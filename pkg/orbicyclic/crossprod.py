"""Per-class assembly of HH, HC and HP for O[X]⋊Γ.

Each conjugacy class γ contributes the invariants of its centralizer C(γ) acting on the
homology of the fixed set X^γ. Two backends exist: linear actions on C^n (fixed sets are
subspaces) and monomial actions on (C*)^n (fixed sets are subtori or empty). Torus
cohomology is the exterior algebra on H¹, and translations act trivially on it, so the
centralizer acts through the permutation it induces on the cycles of γ.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter
from typing import Any, Union

from .exactla import (
    DimTable,
    InvariantViolation,
    RationalMatrix,
    averaging_projector,
    exterior_power,
    invariant_dimension,
    kernel_matrix,
    rank,
    solve_in_basis,
)
from .findim import FindimHomology, findim_crossed_product, findim_hc_dims, findim_hh_dims
from .groups import ActionKind, FiniteGroup, LinearElement, MonomialElement, centralizer, conjugacy_classes
from .hochschild import DEFAULT_BLOCK_LIMIT, check_block_size, hc_twisted_dims, hh_twisted_dims
from .polyforms import action_on_forms, de_rham_matrix, form_space_dim

logger = logging.getLogger(__name__)


class OracleMismatch(InvariantViolation):
    def __init__(self, theory: str, representative: int, key: tuple[int, int], got: int, expected: int) -> None:
        i, D = key
        super().__init__(f"{theory} of class g{representative} at ({i}, D={D}): fixed-set forms give {got}, the bar complex gives {expected}")


class UnsupportedAction(ValueError):
    def __init__(self, theory: str, kind: ActionKind) -> None:
        super().__init__(f"{theory} is not available for {kind.value} actions")


# ── fixed sets ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class LinearFixed:
    """ker(g−1) ⊂ C^n, as an n×m column basis."""

    basis: RationalMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols

    def describe(self) -> dict[str, Any]:
        return {"type": "linear", "dim": self.rank}


@dataclass(frozen=True)
class TorusFixed:
    """A subtorus of rank len(cycles); each cycle is listed from its smallest coordinate."""

    cycles: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.cycles)

    def describe(self) -> dict[str, Any]:
        return {"type": "torus", "rank": self.rank, "cycles": [[i + 1 for i in c] for c in self.cycles]}


@dataclass(frozen=True)
class EmptyFixed:
    def describe(self) -> dict[str, Any]:
        return {"type": "empty"}


FixedSet = Union[LinearFixed, TorusFixed, EmptyFixed]


def fixed_set(g: LinearElement | MonomialElement | RationalMatrix) -> FixedSet:
    if isinstance(g, MonomialElement):
        cycles = g.cycles()
        for cycle in cycles:
            if sum((g.shift[i] for i in cycle), Fraction(0)) % 1:
                return EmptyFixed()
        return TorusFixed(tuple(cycles))
    matrix = g.matrix if isinstance(g, LinearElement) else g
    return LinearFixed(kernel_matrix(matrix - RationalMatrix.identity(matrix.rows)))


def centralizer_action_on_torus_h1(G: FiniteGroup, gamma: int, fixed: TorusFixed) -> list[RationalMatrix]:
    """Permutation matrices of the cycles of γ induced by each element of C(γ)."""
    owner = {i: k for k, cycle in enumerate(fixed.cycles) for i in cycle}
    r = fixed.rank
    out = []
    for c in centralizer(G, gamma):
        element: MonomialElement = G.elements[c]
        entries = {(owner[element.perm[cycle[0]]], k): 1 for k, cycle in enumerate(fixed.cycles)}
        out.append(RationalMatrix.from_entries(entries, (r, r)))
    return out


def torus_hp_contribution(r: int, h1_action: Sequence[RationalMatrix], q: int) -> int:
    """Σ_{k ≡ q mod 2} dim (Λ^k H¹)^C."""
    action = list(h1_action) or [RationalMatrix.identity(r)]
    return sum(invariant_dimension([exterior_power(M, k) for M in action]) for k in range(q % 2, r + 1, 2))


def _restricted_centralizer(G: FiniteGroup, gamma: int, V: RationalMatrix) -> list[RationalMatrix]:
    """Centralizer elements written in the basis V of the fixed subspace."""
    return [solve_in_basis(V, G.elements[c].matrix @ V) for c in centralizer(G, gamma)]


# ── reports ───────────────────────────────────────────────────────────


@dataclass
class ClassReport:
    representative: int
    element: dict[str, Any]
    size: int
    centralizer_order: int
    fixed_set: FixedSet | None
    tables: dict[str, Any] = field(default_factory=dict)
    seconds: float | None = None


@dataclass
class HomologyReport:
    theory: str
    group_order: int
    kind: ActionKind
    classes: list[ClassReport]
    totals: Any = None
    limits: dict[str, int] = field(default_factory=dict)


def _class_reports(G: FiniteGroup) -> list[ClassReport]:
    reports = []
    for cls in conjugacy_classes(G):
        element = G.elements[cls.representative]
        fixed = None if G.kind is ActionKind.FINDIM else fixed_set(element)
        reports.append(ClassReport(cls.representative, element.describe(), len(cls.members), len(centralizer(G, cls.representative)), fixed))
    return reports


def _sum_tables(tables: Sequence[DimTable]) -> DimTable:
    out: DimTable = {}
    for table in tables:
        for key, value in table.items():
            out[key] = out.get(key, 0) + value
    return out


def classes_report(G: FiniteGroup) -> HomologyReport:
    classes = _class_reports(G)
    return HomologyReport("classes", G.order, G.kind, classes, totals={"classes": len(classes)})


def hp_report(G: FiniteGroup) -> HomologyReport:
    """dim HP_0, HP_1 per class from the cohomology of its fixed set."""
    if G.kind is ActionKind.FINDIM:
        raise UnsupportedAction("HP", G.kind)
    classes = _class_reports(G)
    for report in classes:
        start = perf_counter()
        fixed = report.fixed_set
        if isinstance(fixed, EmptyFixed):
            hp = [0, 0]
        elif isinstance(fixed, LinearFixed):
            hp = [1, 0]
        else:
            assert isinstance(fixed, TorusFixed)
            action = centralizer_action_on_torus_h1(G, report.representative, fixed)
            hp = [torus_hp_contribution(fixed.rank, action, q) for q in (0, 1)]
        report.tables["HP"] = hp
        report.seconds = perf_counter() - start
        logger.info("HP of class g%d (%s): %s", report.representative, fixed.describe(), hp)
    totals = [sum(r.tables["HP"][q] for r in classes) for q in (0, 1)]
    return HomologyReport("HP", G.order, G.kind, classes, totals=totals)


def _linear_only(G: FiniteGroup, theory: str) -> None:
    if G.kind is not ActionKind.LINEAR:
        raise UnsupportedAction(theory, G.kind)


def _forms_hh(m: int, restricted: Sequence[RationalMatrix], q_max: int, D_max: int) -> DimTable:
    table: DimTable = {}
    for D in range(D_max + 1):
        for q in range(q_max + 1):
            if m == 0:
                table[q, D] = int(q == 0 and D == 0)
            elif form_space_dim(m, D - q, q) == 0:
                table[q, D] = 0
            else:
                table[q, D] = invariant_dimension([action_on_forms(R, D - q, q) for R in restricted])
    return table


def hh_graded_report(G: FiniteGroup, q_max: int, D_max: int, oracle: bool = False, limit: int = DEFAULT_BLOCK_LIMIT) -> HomologyReport:
    """HH_q in internal degree D: centralizer invariants of q-forms of degree D − q on the fixed subspace."""
    _linear_only(G, "HH")
    if oracle:
        check_block_size(G.dim, q_max + 1, D_max, limit)
    classes = _class_reports(G)
    for report in classes:
        start = perf_counter()
        fixed = report.fixed_set
        assert isinstance(fixed, LinearFixed)
        restricted = _restricted_centralizer(G, report.representative, fixed.basis) if fixed.rank else []
        table = _forms_hh(fixed.rank, restricted, q_max, D_max)
        if oracle:
            _compare("HH", report.representative, table, _oracle_hh(G, report.representative, q_max, D_max, limit))
        report.tables["HH"] = table
        report.seconds = perf_counter() - start
        logger.info("HH of class g%d on a fixed space of dim %d", report.representative, fixed.rank)
    return HomologyReport("HH", G.order, G.kind, classes, totals=_sum_tables([r.tables["HH"] for r in classes]), limits={"q_max": q_max, "D_max": D_max})


def _forms_hc(m: int, restricted: Sequence[RationalMatrix], n_max: int, D_max: int) -> DimTable:
    """(Ω^n_D / dΩ^{n−1}_D)^C plus H⁰ in every even degree; D counts total degree."""
    table: DimTable = {}
    for n in range(n_max + 1):
        table[n, 0] = int(n % 2 == 0)
    for D in range(1, D_max + 1):
        for n in range(n_max + 1):
            if m == 0 or form_space_dim(m, D - n, n) == 0:
                table[n, D] = 0
                continue
            invariant = invariant_dimension([action_on_forms(R, D - n, n) for R in restricted])
            exact = 0
            if n >= 1 and form_space_dim(m, D - n + 1, n - 1):
                P = averaging_projector([action_on_forms(R, D - n + 1, n - 1) for R in restricted])
                exact = rank(de_rham_matrix(m, D - n + 1, n - 1) @ P)
            table[n, D] = invariant - exact
    return table


def hc_graded_report(G: FiniteGroup, n_max: int, D_max: int, oracle: bool = False, limit: int = DEFAULT_BLOCK_LIMIT) -> HomologyReport:
    """HC_n in internal degree D from invariant forms modulo exact forms on each fixed subspace."""
    _linear_only(G, "HC")
    if oracle:
        check_block_size(G.dim, n_max + 1, D_max, limit)
    classes = _class_reports(G)
    for report in classes:
        start = perf_counter()
        fixed = report.fixed_set
        assert isinstance(fixed, LinearFixed)
        restricted = _restricted_centralizer(G, report.representative, fixed.basis) if fixed.rank else []
        table = _forms_hc(fixed.rank, restricted, n_max, D_max)
        if oracle:
            _compare("HC", report.representative, table, _oracle_hc(G, report.representative, n_max, D_max, limit))
        report.tables["HC"] = table
        report.seconds = perf_counter() - start
    return HomologyReport("HC", G.order, G.kind, classes, totals=_sum_tables([r.tables["HC"] for r in classes]), limits={"n_max": n_max, "D_max": D_max})


def _findim_report(G: FiniteGroup, theory: str, result: FindimHomology, limits: dict[str, int]) -> HomologyReport:
    classes = _class_reports(G)
    dims = {c.representative: c.dims for c in result.per_class or []}
    for report in classes:
        report.tables[theory] = dims[report.representative]
    return HomologyReport(theory, G.order, G.kind, classes, totals=result.total, limits=limits)


def findim_hh_report(G: FiniteGroup, q_max: int, limit: int = DEFAULT_BLOCK_LIMIT) -> HomologyReport:
    """HH of A⋊Γ for Γ acting on a structure-constant algebra A, split by class."""
    if G.kind is not ActionKind.FINDIM:
        raise UnsupportedAction("the structure-constant bar complex", G.kind)
    algebra = findim_crossed_product(G.elements[0].algebra, G)
    return _findim_report(G, "HH", findim_hh_dims(algebra, q_max, limit), {"q_max": q_max})


def findim_hc_report(G: FiniteGroup, n_max: int, limit: int = DEFAULT_BLOCK_LIMIT) -> HomologyReport:
    if G.kind is not ActionKind.FINDIM:
        raise UnsupportedAction("the structure-constant bar complex", G.kind)
    algebra = findim_crossed_product(G.elements[0].algebra, G)
    return _findim_report(G, "HC", findim_hc_dims(algebra, n_max, limit), {"n_max": n_max})


# ── bar-complex oracles ───────────────────────────────────────────────


def _centralizer_matrices(G: FiniteGroup, gamma: int) -> list[RationalMatrix]:
    return [G.elements[c].matrix for c in centralizer(G, gamma)]


def _oracle_hh(G: FiniteGroup, gamma: int, q_max: int, D_max: int, limit: int) -> DimTable:
    return hh_twisted_dims(G.elements[gamma].matrix, q_max, D_max, centralizer=_centralizer_matrices(G, gamma), limit=limit)


def _oracle_hc(G: FiniteGroup, gamma: int, n_max: int, D_max: int, limit: int) -> DimTable:
    return hc_twisted_dims(G.elements[gamma].matrix, n_max, D_max, centralizer=_centralizer_matrices(G, gamma), limit=limit)


def _compare(theory: str, gamma: int, got: DimTable, expected: DimTable) -> None:
    for key, value in got.items():
        if expected.get(key, 0) != value:
            raise OracleMismatch(theory, gamma, key, value, expected.get(key, 0))


__all_errors__ = [
    OracleMismatch,
    UnsupportedAction,
]

__all__ = [
    ClassReport,
    EmptyFixed,
    FixedSet,
    HomologyReport,
    LinearFixed,
    TorusFixed,
    centralizer_action_on_torus_h1,
    classes_report,
    findim_hc_report,
    findim_hh_report,
    fixed_set,
    hc_graded_report,
    hh_graded_report,
    hp_report,
    torus_hp_contribution,
    *__all_errors__,
]
