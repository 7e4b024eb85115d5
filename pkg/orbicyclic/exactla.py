"""Exact rational linear algebra.

Everything here sits on sympy's sparse ``DomainMatrix`` over ``QQ``. Matrices are
always kept in the sparse format: sympy's ``+``/``*`` operators silently densify,
so only the explicit ``matmul``/``add``/``sub`` methods are used.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, str]


class InvariantViolation(Exception):
    """Base for every "the mathematics did not come out right" failure."""


class CompositionNotZero(InvariantViolation):
    def __init__(self, d_in_shape: tuple[int, int], d_out_shape: tuple[int, int], label: str = "") -> None:
        where = f" in {label}" if label else ""
        super().__init__(f"d_out·d_in ≠ 0{where}: d_in is {d_in_shape[0]}×{d_in_shape[1]}, d_out is {d_out_shape[0]}×{d_out_shape[1]}")


class NonIntegralTrace(InvariantViolation):
    def __init__(self, trace: Fraction, where: str, reason: str) -> None:
        super().__init__(f"Trace {trace} of {where} is not a non-negative integer; {reason}")


class DimensionMismatch(ValueError):
    def __init__(self, op: str, left: tuple[int, int], right: tuple[int, int]) -> None:
        super().__init__(f"Cannot {op} a {left[0]}×{left[1]} matrix with a {right[0]}×{right[1]} matrix")


class SingularMatrix(ValueError):
    def __init__(self, shape: tuple[int, int]) -> None:
        super().__init__(f"Matrix of shape {shape[0]}×{shape[1]} is not invertible")


class NotInSpan(ValueError):
    def __init__(self, rows: int, cols: int) -> None:
        super().__init__(f"Columns of the {rows}×{cols} target do not lie in the span of the given basis")


def to_qq(value: Any) -> Any:
    """Coerce ints, Fractions, rational strings ("3/4") and QQ elements into QQ."""
    if QQ.of_type(value):
        return value
    if isinstance(value, bool):
        raise TypeError(f"Refusing to treat boolean {value!r} as a rational")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def from_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    """Immutable matrix of exact rationals backed by a sparse ``DomainMatrix``."""

    dm: DomainMatrix

    def __post_init__(self) -> None:
        dm = self.dm
        if dm.domain != QQ:
            dm = dm.convert_to(QQ)
        if dm.rep.fmt != "sparse":
            dm = dm.to_sparse()
        object.__setattr__(self, "dm", dm)

    # ── construction ──────────────────────────────────────────────────

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(DomainMatrix({}, (rows, cols), QQ))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(DomainMatrix.eye(n, QQ))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> RationalMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries: dict[int, dict[int, Any]] = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch("build rows of", (len(rows), cols), (1, len(row)))
            nonzero = {j: q for j, v in enumerate(row) if (q := to_qq(v))}
            if nonzero:
                entries[i] = nonzero
        return cls(DomainMatrix(entries, (len(rows), cols), QQ))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> RationalMatrix:
        return cls.from_rows([list(c) for c in columns], cols=rows).transpose() if columns else cls.zeros(rows, 0)

    @classmethod
    def from_entries(cls, entries: Mapping[tuple[int, int], Any], shape: tuple[int, int]) -> RationalMatrix:
        """Build from a ``{(row, col): value}`` mapping; zero values are dropped."""
        nested: dict[int, dict[int, Any]] = {}
        for (i, j), v in entries.items():
            v = to_qq(v)
            if v:
                nested.setdefault(i, {})[j] = v
        return cls(DomainMatrix(nested, shape, QQ))

    @classmethod
    def block(cls, blocks: Mapping[tuple[int, int], RationalMatrix], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> RationalMatrix:
        """Assemble a block matrix; missing blocks are zero."""
        row_offsets = [sum(row_sizes[:k]) for k in range(len(row_sizes))]
        col_offsets = [sum(col_sizes[:k]) for k in range(len(col_sizes))]
        nested: dict[int, dict[int, Any]] = {}
        for (bi, bj), sub in blocks.items():
            if sub.shape != (row_sizes[bi], col_sizes[bj]):
                raise DimensionMismatch("place block", (row_sizes[bi], col_sizes[bj]), sub.shape)
            for (i, j), v in sub.dm.to_dok().items():
                nested.setdefault(row_offsets[bi] + i, {})[col_offsets[bj] + j] = v
        return cls(DomainMatrix(nested, (sum(row_sizes), sum(col_sizes)), QQ))

    # ── shape and entries ─────────────────────────────────────────────

    @property
    def shape(self) -> tuple[int, int]:
        return self.dm.shape

    @property
    def rows(self) -> int:
        return self.dm.shape[0]

    @property
    def cols(self) -> int:
        return self.dm.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dm.is_zero_matrix

    def entry(self, i: int, j: int) -> Fraction:
        value = self.dm.rep.get(i, {}).get(j)
        return from_qq(value) if value is not None else Fraction(0)

    def items(self) -> Iterator[tuple[int, int, Any]]:
        """Nonzero entries as ``(row, col, qq_value)``."""
        for i, row in self.dm.rep.items():
            for j, v in row.items():
                yield i, j, v

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, j, v in self.items():
            out[i][j] = from_qq(v)
        return out

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entry(i, j) for i in range(self.rows))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("take the trace of", self.shape, self.shape)
        total = QQ(0)
        for i, row in self.dm.rep.items():
            total += row.get(i, QQ(0))
        return from_qq(total)

    def key(self) -> tuple:
        """Canonical hashable form: shape plus sorted nonzero entries."""
        return (self.shape, tuple(sorted((i, j, int(v.numerator), int(v.denominator)) for i, j, v in self.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.dm.sub(other.dm).is_zero_matrix

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.to_rows())
        return f"RationalMatrix([{body}])"

    # ── arithmetic ────────────────────────────────────────────────────

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch("multiply", self.shape, other.shape)
        return RationalMatrix(self.dm.matmul(other.dm))

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch("add", self.shape, other.shape)
        return RationalMatrix(self.dm.add(other.dm))

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch("subtract", self.shape, other.shape)
        return RationalMatrix(self.dm.sub(other.dm))

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix(self.dm.neg())

    def scale(self, c: Scalar) -> RationalMatrix:
        c = to_qq(c)
        if not c:
            return RationalMatrix.zeros(*self.shape)
        return RationalMatrix(self.dm.scalarmul(c))

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(self.dm.transpose())

    def inverse(self) -> RationalMatrix:
        if self.rows != self.cols or rank(self) != self.rows:
            raise SingularMatrix(self.shape)
        if self.rows == 0:
            return self
        return RationalMatrix(self.dm.to_dense().inv())

    def extract(self, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
        if not rows or not cols:
            return RationalMatrix.zeros(len(rows), len(cols))
        return RationalMatrix(self.dm.extract(list(rows), list(cols)))

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("take the determinant of", self.shape, self.shape)
        if self.rows == 0:
            return Fraction(1)
        return from_qq(self.dm.to_dense().det())


# ── core operations ───────────────────────────────────────────────────


def rank(M: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    if M.rows == 0 or M.cols == 0 or M.is_zero:
        return 0
    logger.debug("rank of %d×%d block (%d nonzeros)", M.rows, M.cols, M.dm.nnz())
    # sparse Gauss-Jordan is cheapest when rows are short
    dm = M.dm if M.rows >= M.cols else M.dm.transpose()
    return dm.rank()


def kernel_basis(M: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the null space; vectors come from the reduced row echelon form, so they are reproducible."""
    if M.cols == 0:
        return []
    if M.rows == 0 or M.is_zero:
        return [tuple(Fraction(int(i == j)) for i in range(M.cols)) for j in range(M.cols)]
    null = M.dm.nullspace()
    return [tuple(from_qq(v) for v in row) for row in null.to_list()]


def kernel_matrix(M: RationalMatrix) -> RationalMatrix:
    """The kernel basis as the columns of a ``cols × nullity`` matrix."""
    return RationalMatrix.from_columns(kernel_basis(M), M.cols)


def homology_dim(d_in: RationalMatrix, d_out: RationalMatrix, label: str = "") -> int:
    """dim ker(d_out) − rank(d_in), after checking d_out·d_in = 0."""
    if d_in.rows != d_out.cols:
        raise DimensionMismatch("compose", d_out.shape, d_in.shape)
    if not (d_out @ d_in).is_zero:
        raise CompositionNotZero(d_in.shape, d_out.shape, label)
    return d_out.cols - rank(d_out) - rank(d_in)


def projected_homology_dim(d_in: RationalMatrix, d_out: RationalMatrix, p_in: RationalMatrix, p_mid: RationalMatrix, label: str = "") -> int:
    """Homology at the middle of the subcomplex cut out by idempotents commuting with the differentials."""
    if d_in.rows != d_out.cols or p_mid.shape != (d_out.cols, d_out.cols) or p_in.shape != (d_in.cols, d_in.cols):
        raise DimensionMismatch("compose", d_out.shape, d_in.shape)
    inner = d_in @ p_in
    if not (d_out @ inner).is_zero:
        raise CompositionNotZero(d_in.shape, d_out.shape, label)
    trace = p_mid.trace()
    if trace.denominator != 1 or trace < 0:
        raise NonIntegralTrace(trace, f"the middle projector{f' of {label}' if label else ''}", "it is not an idempotent")
    return int(trace) - rank(d_out @ p_mid) - rank(inner)


def invariant_dimension(representation: Sequence[RationalMatrix]) -> int:
    """Dimension of the common fixed space, as the trace of the averaging idempotent."""
    if not representation:
        raise ValueError("invariant_dimension needs at least one matrix")
    trace = sum((g.trace() for g in representation), Fraction(0)) / len(representation)
    if trace.denominator != 1 or trace < 0:
        raise NonIntegralTrace(trace, f"the average over {len(representation)} matrices", "they do not form a group representation")
    return int(trace)


def averaging_projector(representation: Sequence[RationalMatrix]) -> RationalMatrix:
    """P = (1/|G|) Σ g, the idempotent onto the invariants."""
    total = representation[0]
    for g in representation[1:]:
        total = total + g
    return total.scale(Fraction(1, len(representation)))


def exterior_power(M: RationalMatrix, k: int) -> RationalMatrix:
    """Λ^k M: entry (I, J) is the minor det M[I, J], subsets in lexicographic order."""
    row_sets = list(combinations(range(M.rows), k))
    col_sets = list(combinations(range(M.cols), k))
    entries: dict[tuple[int, int], Fraction] = {}
    for a, rows in enumerate(row_sets):
        for b, cols in enumerate(col_sets):
            minor = M.extract(rows, cols).det()
            if minor:
                entries[a, b] = minor
    return RationalMatrix.from_entries(entries, (len(row_sets), len(col_sets)))


def solve_in_basis(V: RationalMatrix, W: RationalMatrix) -> RationalMatrix:
    """X with V·X = W, for V of full column rank."""
    if V.rows != W.rows:
        raise DimensionMismatch("solve against", V.shape, W.shape)
    if V.cols == 0:
        if not W.is_zero:
            raise NotInSpan(W.rows, W.cols)
        return RationalMatrix.zeros(0, W.cols)
    _, pivots = V.transpose().dm.rref()
    if len(pivots) != V.cols:
        raise SingularMatrix(V.shape)
    rows = list(pivots)
    X = V.extract(rows, range(V.cols)).inverse() @ W.extract(rows, range(W.cols))
    if V @ X != W:
        raise NotInSpan(W.rows, W.cols)
    return X


DimTable = dict[tuple[int, int], int]


def dim_grid(table: DimTable, first_max: int, D_max: int) -> list[list[int]]:
    """Table as rows indexed by the homological degree, columns by the internal degree D."""
    return [[table.get((i, D), 0) for D in range(D_max + 1)] for i in range(first_max + 1)]


__all_errors__ = [
    InvariantViolation,
    CompositionNotZero,
    NonIntegralTrace,
    DimensionMismatch,
    SingularMatrix,
    NotInSpan,
]

__all__ = [
    DimTable,
    RationalMatrix,
    averaging_projector,
    dim_grid,
    exterior_power,
    from_qq,
    homology_dim,
    invariant_dimension,
    kernel_basis,
    kernel_matrix,
    projected_homology_dim,
    rank,
    solve_in_basis,
    to_qq,
    *__all_errors__,
]
