"""Built-in invariant and end-to-end checks, run by ``orbicyclic selftest``."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from time import perf_counter

import colors as clr

from .algebra import ground_field, matrix_algebra
from .config import build_group, parse_action, preset
from .crossprod import hh_graded_report, hp_report
from .exactla import InvariantViolation, RationalMatrix, homology_dim, kernel_basis, rank
from .findim import findim_crossed_product, findim_hc_dims, findim_hh_dims
from .groups import FiniteGroup, LinearElement, centralizer, close_group, conjugacy_classes
from .hochschild import (
    B_twisted,
    b_prime_twisted,
    b_twisted,
    chkr_chi_matrix,
    extra_degeneracy,
    hh_twisted_dims,
    kappa_E,
)
from .koszul import build_koszul, koszul_filtered_homology_dims, koszul_for_element, koszul_homology_dims, koszul_restriction_dims
from .polyforms import de_rham_matrix, form_space_dim
from .weyl import cycle_type, hp_weyl_formula, partitions, weyl_cross_check

logger = logging.getLogger(__name__)


class CheckFailed(InvariantViolation):
    def __init__(self, what: str) -> None:
        super().__init__(f"Check failed: {what}")


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], None]
    slow: bool = False


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    seconds: float
    error: str | None = None


CHECKS: list[Check] = []


def check(name: str, slow: bool = False) -> Callable[[Callable[[], None]], Callable[[], None]]:
    def register(fn: Callable[[], None]) -> Callable[[], None]:
        CHECKS.append(Check(name, fn, slow))
        return fn

    return register


def expect(condition: bool, what: str) -> None:
    if not condition:
        raise CheckFailed(what)


def _group(name: str) -> FiniteGroup:
    return build_group(parse_action(preset(name), name))


def _sample_elements() -> dict[str, RationalMatrix]:
    return {
        "−1 on C¹": RationalMatrix.from_rows([[-1]]),
        "swap on C²": RationalMatrix.from_rows([[0, 1], [1, 0]]),
        "3-cycle on C³": RationalMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        "diag(1, −1) on C²": RationalMatrix.from_rows([[1, 0], [0, -1]]),
        "−1 on C²": RationalMatrix.from_rows([[-1, 0], [0, -1]]),
    }


def _unitriangular(n: int) -> RationalMatrix:
    """1 on the diagonal and the superdiagonal; invertible for every n."""
    return RationalMatrix.from_entries({**{(i, i): 1 for i in range(n)}, **{(i, i + 1): 1 for i in range(n - 1)}}, (n, n))


def _partition_count(n: int, largest: int) -> int:
    if n == 0:
        return 1
    if largest == 0:
        return 0
    return _partition_count(n, largest - 1) + (_partition_count(n - largest, largest) if largest <= n else 0)


# ── checks ────────────────────────────────────────────────────────────


@check("rank-nullity and change of basis in exact linear algebra")
def linear_algebra() -> None:
    g = _sample_elements()["swap on C²"]
    for D in range(4):
        for q in range(3):
            d_in, d_out = b_twisted(g, q + 1, D), b_twisted(g, q, D)
            for M in (d_in, d_out):
                expect(rank(M) + len(kernel_basis(M)) == M.cols, f"rank + nullity ≠ {M.cols} for a {M.rows}×{M.cols} block")
            P = _unitriangular(d_out.cols)
            moved = homology_dim(P.inverse() @ d_in, d_out @ P)
            expect(moved == homology_dim(d_in, d_out), f"homology at (q={q}, D={D}) moves under a change of basis")


@check("orbit-stabilizer and generator order in finite groups")
def group_orbits() -> None:
    for name in ("S3-space", "S4-torus", "Z2-torus-sign", "C3-space"):
        action = parse_action(preset(name), name)
        G = build_group(action)
        classes = conjugacy_classes(G)
        expect(sum(len(c.members) for c in classes) == G.order, f"{name}: classes do not partition the group")
        for c in classes:
            for g in c.members:
                expect(len(c.members) * len(centralizer(G, g)) == G.order, f"{name}: |class of g{g}|·|C(g{g})| ≠ {G.order}")
        H = build_group(replace(action, generators=tuple(reversed(action.generators))))
        by_keys = {frozenset(G.elements[m].key() for m in c.members) for c in classes}
        expect(by_keys == {frozenset(H.elements[m].key() for m in c.members) for c in conjugacy_classes(H)}, f"{name}: classes depend on generator order")


@check("de Rham d² = 0 and the polynomial Poincaré lemma")
def de_rham() -> None:
    for m in (1, 2, 3):
        for D in range(5):
            for q in range(min(m, D) + 1):
                c = D - q
                d = de_rham_matrix(m, c, q)
                expect((de_rham_matrix(m, c - 1, q + 1) @ d).is_zero, f"d² ≠ 0 on C^{m} at (q={q}, c={c})")
                expected = int(D == 0)
                got = homology_dim(de_rham_matrix(m, c + 1, q - 1), d)
                expect(got == expected, f"de Rham H^{q} on C^{m} in degree {D} is {got}")


@check("Koszul homology does not depend on the order of the exterior basis")
def koszul_basis_order() -> None:
    for label, g in _sample_elements().items():
        K = koszul_for_element(g, 3)
        reversal = RationalMatrix.from_entries({(i, K.e - 1 - i): 1 for i in range(K.e)}, (K.e, K.e))
        flipped = build_koszul(K.n, reversal @ K.f, 3)
        expect(koszul_homology_dims(flipped, 3) == koszul_homology_dims(K, 3), f"{label}: reordering e_i changes the homology")


@check("partition enumeration against the recursive count")
def partition_counts() -> None:
    for n in range(1, 13):
        expect(len(partitions(n)) == _partition_count(n, n), f"n={n}: {len(partitions(n))} partitions, recursion gives {_partition_count(n, n)}")


@check("Koszul resolution of the origin")
def koszul_resolution() -> None:
    for n in (1, 2, 3):
        f = [[0, *(int(i == j) for j in range(n))] for i in range(n)]
        dims = koszul_homology_dims(build_koszul(n, f, 4), 4)
        for (j, D), dim in dims.items():
            expect(dim == int(j == 0 and D == 0), f"n={n}: H_{j} in degree {D} is {dim}")


@check("Koszul homology of a translated point")
def koszul_filtered() -> None:
    dims = koszul_filtered_homology_dims(build_koszul(1, [[-1, 1]], 4), 4)
    for D in range(5):
        expect(dims[0, D] == 1 and dims[1, D] == 0, f"f = x − 1 at D≤{D}: {dims[0, D]}, {dims[1, D]}")


@check("twisted HKR: Koszul, bar complex and fixed-space forms agree")
def twisted_hkr() -> None:
    for label, g in _sample_elements().items():
        expected = koszul_restriction_dims(g, 4)
        bar = hh_twisted_dims(g, 3, 4)
        for (q, D), dim in bar.items():
            expect(dim == expected[q, D], f"{label}: bar HH_{q} in degree {D} is {dim}, forms give {expected[q, D]}")


@check("chain-map identities on bar, Koszul and form blocks")
def chain_maps() -> None:
    for label, g in list(_sample_elements().items())[:3]:
        n = g.rows
        m = n - rank(g - RationalMatrix.identity(n))
        K = koszul_for_element(g, 3)
        for D in range(4):
            for q in range(4):
                b_q, b_next = b_twisted(g, q, D), b_twisted(g, q + 1, D)
                expect((b_q @ b_next).is_zero, f"{label}: b² ≠ 0 at (q={q + 1}, D={D})")
                expect((b_prime_twisted(g, q, D) @ b_prime_twisted(g, q + 1, D)).is_zero, f"{label}: b'² ≠ 0 at (q={q + 1}, D={D})")
                if 1 <= q <= n:
                    expect(b_q @ kappa_E(g, q, D) == kappa_E(g, q - 1, D) @ K.differential(q, D), f"{label}: κ∂ ≠ bκ at (q={q}, D={D})")
                contraction = b_prime_twisted(g, q + 1, D) @ extra_degeneracy(g, q, D)
                if q >= 1:
                    contraction = contraction + extra_degeneracy(g, q - 1, D) @ b_prime_twisted(g, q, D)
                expect(contraction == RationalMatrix.identity(contraction.rows), f"{label}: sb' + b's ≠ 1 at (q={q}, D={D})")
                B_q = B_twisted(g, q, D)
                expect((B_twisted(g, q + 1, D) @ B_q).is_zero, f"{label}: B² ≠ 0 at (q={q}, D={D})")
                anti = b_twisted(g, q + 1, D) @ B_q
                if q >= 1:
                    anti = anti + B_twisted(g, q - 1, D) @ b_q
                expect(anti.is_zero, f"{label}: bB + Bb ≠ 0 at (q={q}, D={D})")
                chi = chkr_chi_matrix(g, q, D)
                expect((chi @ b_next).is_zero, f"{label}: χb ≠ 0 at (q={q}, D={D})")
                if form_space_dim(m, D - q - 1, q + 1):
                    expect(chkr_chi_matrix(g, q + 1, D) @ B_q == de_rham_matrix(m, D - q, q) @ chi, f"{label}: χB ≠ dχ at (q={q}, D={D})")


@check("vanishing of classes without fixed points")
def vanishing() -> None:
    report = hp_report(_group("Z2-torus-sign"))
    expect(report.totals == [1, 1], f"HP totals {report.totals}")
    expect(report.classes[1].tables["HP"] == [0, 0], "the sign class contributes")


@check("crossed-product HH of S_2 on C²")
def crossed_hh() -> None:
    report = hh_graded_report(_group("S2-plane"), 1, 4)
    identity, swap = report.classes
    expect(identity.tables["HH"][0, 2] == 2, "invariant quadratics")
    for D in range(1, 5):
        expect(swap.tables["HH"][1, D] == 1, f"swap class at (q=1, D={D})")


@check("crossed-product HH against the twisted bar complex", slow=True)
def crossed_hh_oracle() -> None:
    hh_graded_report(_group("S2-plane"), 2, 4, oracle=True)
    hh_graded_report(_group("S3-space"), 2, 3, oracle=True)


@check("orbifold HP on tori")
def orbifold_hp() -> None:
    expect(hp_report(_group("S2-torus")).totals == [2, 2], "S_2 on T²")
    G = _group("S4-torus")
    for cls in hp_report(G).classes:
        if cycle_type(G.elements[cls.representative].perm).parts == (2, 2):
            expect(cls.tables["HP"] == [1, 1], f"σ_(2,2) contributes {cls.tables['HP']}")


@check("HP of C[Z^n ⋊ S_n] from partitions")
def weyl_formula() -> None:
    for n, hp in zip(range(1, 6), (1, 2, 4, 7, 12)):
        formula = hp_weyl_formula(n)
        expect((formula.hp0, formula.hp1) == (hp, hp), f"n={n}: ({formula.hp0}, {formula.hp1})")


@check("partition formula against the crossed-product machinery", slow=True)
def weyl_cross() -> None:
    for n in range(1, 5):
        expect(weyl_cross_check(n), f"n={n}")


@check("cyclic homology of small algebras")
def findim_hc() -> None:
    expect(findim_hc_dims(ground_field(), 3).total == [1, 0, 1, 0], "HC(C)")
    expect(findim_hc_dims(matrix_algebra(2), 2).total == [1, 0, 1], "HC(M_2)")
    Z2 = close_group([LinearElement(RationalMatrix.from_rows([[-1]]))])
    trivial = {g: RationalMatrix.identity(1) for g in range(Z2.order)}
    expect(findim_hc_dims(findim_crossed_product(ground_field(), Z2, trivial), 2).total == [2, 0, 2], "HC(C[Z/2])")


@check("Azumaya crossed product M_2 ⋊ (Z/2)²", slow=True)
def azumaya() -> None:
    G = _group("M2-azumaya")
    result = findim_hh_dims(findim_crossed_product(G.elements[0].algebra, G), 2)
    expect(result.total == [1, 0, 0], f"HH totals {result.total}")
    for cls in result.per_class or []:
        if cls.representative != G.identity:
            expect(not any(cls.dims), f"class g{cls.representative} gives {cls.dims}")


def run_selftest(quick: bool = False) -> list[CheckResult]:
    results = []
    for c in CHECKS:
        if quick and c.slow:
            continue
        start = perf_counter()
        try:
            c.run()
        except InvariantViolation as e:
            results.append(CheckResult(c.name, False, perf_counter() - start, str(e)))
            logger.info("check %r failed: %s", c.name, e)
            continue
        except Exception as e:
            results.append(CheckResult(c.name, False, perf_counter() - start, f"{type(e).__name__}: {e}"))
            logger.warning("check %r raised %s", c.name, type(e).__name__, exc_info=True)
            continue
        results.append(CheckResult(c.name, True, perf_counter() - start))
    return results


def format_results(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        mark = clr.green("PASS") if r.ok else clr.red("FAIL")
        lines.append(f"{mark} {r.name}" + (f"\n     {r.error}" if r.error else ""))
    failed = sum(1 for r in results if not r.ok)
    summary = f"{len(results) - failed} passed, {failed} failed"
    lines.append(clr.red(summary) if failed else clr.green(summary))
    return "\n".join(lines)


__all_errors__ = [
    CheckFailed,
]

__all__ = [
    Check,
    CheckResult,
    format_results,
    run_selftest,
    *__all_errors__,
]
