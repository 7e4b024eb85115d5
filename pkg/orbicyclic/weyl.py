"""Partitions, block cycles and the periodic cyclic homology of C[Z^n ⋊ S_n].

The conjugacy classes of S_n are indexed by partitions λ. The class of σ_λ contributes
the cohomology of a torus of rank t(λ), the number of distinct part sizes, so both
parities receive 2^{t(λ)−1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Any, NamedTuple

from sympy.utilities.iterables import partitions as sympy_partitions

from .crossprod import hp_report, torus_hp_contribution
from .exactla import InvariantViolation
from .groups import FiniteGroup, MonomialElement, SizeLimitExceeded, close_group

logger = logging.getLogger(__name__)

DEFAULT_WEYL_LIMIT = 4


class CrossCheckMismatch(InvariantViolation):
    def __init__(self, n: int, detail: str) -> None:
        super().__init__(f"HP of C[Z^{n} ⋊ S_{n}] disagrees between the partition formula and the crossed-product report: {detail}")


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError(f"Partition parts must be positive, got {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"Partition parts must be weakly decreasing, got {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order, (n) first."""
    if n < 1:
        raise ValueError(f"partitions needs n ≥ 1, got {n}")
    out = []
    for p in sympy_partitions(n):
        out.append(Partition(tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True))))
    return sorted(out, reverse=True)


def sigma_lambda(lam: Partition) -> tuple[int, ...]:
    """Block-cycle permutation (0-based images): each block of length l is the cycle s → s+1 → … → s."""
    perm = []
    start = 0
    for length in lam.parts:
        perm.extend(start + (i + 1) % length for i in range(length))
        start += length
    return tuple(perm)


def cycle_type(perm: tuple[int, ...]) -> Partition:
    element = MonomialElement(perm, (Fraction(0),) * len(perm))
    return Partition(tuple(sorted((len(c) for c in element.cycles()), reverse=True)))


def t_of_lambda(lam: Partition) -> int:
    return len(set(lam.parts))


def centralizer_structure(lam: Partition) -> dict[str, Any]:
    """Q_λ permutes equal-length cycles; each cycle also rotates itself."""
    mult = lam.multiplicities()
    perm = sigma_lambda(lam)
    cycles = MonomialElement(perm, (Fraction(0),) * len(perm)).cycles()
    return {
        "order": prod(length**m * factorial(m) for length, m in mult.items()),
        "Q": [{"length": length, "multiplicity": m, "permuted_by": f"S_{m}"} for length, m in sorted(mult.items(), reverse=True)],
        "cycles": [[i + 1 for i in c] for c in cycles],
    }


class LambdaContribution(NamedTuple):
    partition: Partition
    t: int
    hp: tuple[int, int]
    centralizer: dict[str, Any]


class WeylFormula(NamedTuple):
    hp0: int
    hp1: int
    per_lambda: list[LambdaContribution]


def _binomial_route(t: int, q: int) -> int:
    return sum(comb(t, k) for k in range(q % 2, t + 1, 2))


def hp_weyl_formula(n: int) -> WeylFormula:
    """Σ_λ H^{even/odd}(T^{t(λ)}), evaluated by binomial sums and by exterior-power invariants."""
    per_lambda = []
    for lam in partitions(n):
        t = t_of_lambda(lam)
        binomial = (_binomial_route(t, 0), _binomial_route(t, 1))
        exterior = (torus_hp_contribution(t, [], 0), torus_hp_contribution(t, [], 1))
        if binomial != exterior:
            raise CrossCheckMismatch(n, f"λ={lam}: binomial sums {binomial} vs exterior powers {exterior}")
        per_lambda.append(LambdaContribution(lam, t, binomial, centralizer_structure(lam)))
    hp0 = sum(c.hp[0] for c in per_lambda)
    hp1 = sum(c.hp[1] for c in per_lambda)
    logger.info("HP of C[Z^%d ⋊ S_%d] from partitions: (%d, %d)", n, n, hp0, hp1)
    return WeylFormula(hp0, hp1, per_lambda)


def symmetric_group_on_torus(n: int) -> FiniteGroup:
    """S_n acting on (C*)^n by permuting coordinates, generated by (1 2) and (1 2 … n)."""
    zero = (Fraction(0),) * n
    swap = tuple([1, 0, *range(2, n)]) if n >= 2 else (0,)
    rotate = tuple((i + 1) % n for i in range(n))
    return close_group([MonomialElement(swap, zero), MonomialElement(rotate, zero)])


def weyl_cross_check(n: int, limit: int = DEFAULT_WEYL_LIMIT) -> bool:
    """Compare the partition formula with hp_report for S_n on T^n, in total and class by class."""
    if n > limit:
        raise SizeLimitExceeded("weyl cross-check n", n, limit)
    formula = hp_weyl_formula(n)
    G = symmetric_group_on_torus(n)
    report = hp_report(G)
    by_type = {c.partition: c.hp for c in formula.per_lambda}
    agree = True
    for cls in report.classes:
        lam = cycle_type(G.elements[cls.representative].perm)
        if tuple(cls.tables["HP"]) != by_type[lam]:
            logger.warning("class of cycle type %s: report %s, formula %s", lam, cls.tables["HP"], by_type[lam])
            agree = False
    if len(report.classes) != len(formula.per_lambda) or report.totals != [formula.hp0, formula.hp1]:
        logger.warning("totals: report %s, formula %s", report.totals, [formula.hp0, formula.hp1])
        agree = False
    return agree


__all_errors__ = [
    CrossCheckMismatch,
]

__all__ = [
    LambdaContribution,
    Partition,
    WeylFormula,
    centralizer_structure,
    cycle_type,
    hp_weyl_formula,
    partitions,
    sigma_lambda,
    symmetric_group_on_torus,
    t_of_lambda,
    weyl_cross_check,
    *__all_errors__,
]
