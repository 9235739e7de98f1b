"""Dense linear algebra over the scalar field.

Everything here works uniformly for exact `Fraction` entries and for binary
floats; the pivoting strategy is the only place the two modes differ.  Exact
mode takes the first nonzero entry scanning top-left to bottom-right so that
outputs are reproducible; float mode takes the largest-magnitude pivot and
treats anything at or below `zero_tol` as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_ZERO_TOL = 1e-12

UNIQUE = "unique"
PARAMETRIC = "parametric"
INCONSISTENT = "inconsistent"
UNVERIFIED_ENLARGED = "unverified_enlarged"


class FieldMatrix:
    """Immutable dense matrix with scalar entries (Fraction or float)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries:
            raise ValueError("matrix needs at least one row")
        width = len(entries[0])
        if any(len(row) != width for row in entries):
            raise ValueError("ragged matrix rows")
        self.rows = len(entries)
        self.cols = width
        self.entries = entries

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "FieldMatrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=Fraction(0)) -> "FieldMatrix":
        return cls([[zero] * cols for _ in range(rows)])

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self.entries)
        return f"FieldMatrix({self.rows}x{self.cols}: {body})"

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return FieldMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = other.transpose().entries
        return FieldMatrix(
            [[_dot(row, col) for col in cols] for row in self.entries]
        )

    def scale(self, factor) -> "FieldMatrix":
        return FieldMatrix([[factor * v for v in row] for row in self.entries])

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(list(zip(*self.entries)))

    def matvec(self, vector) -> list:
        if len(vector) != self.cols:
            raise ValueError("length mismatch")
        return [_dot(row, vector) for row in self.entries]

    def is_exact(self) -> bool:
        return not any(isinstance(v, float) for row in self.entries for v in row)


def _dot(u, v):
    total = None
    for a, b in zip(u, v):
        total = a * b if total is None else total + a * b
    return total


@dataclass
class SolutionSet:
    """Complete description of the solutions of M x = rhs.

    kind is one of UNIQUE / PARAMETRIC / INCONSISTENT.  When consistent, the
    full solution set is `particular + sum_k t_k * nullspace_basis[k]` with the
    parameters t_k (named free_names[k]) ranging over the scalar field.
    """

    kind: str
    particular: list | None
    nullspace_basis: list
    free_names: list

    def assignment(self, params) -> list:
        """Evaluate the family at concrete parameter values."""
        if self.particular is None:
            raise ValueError("inconsistent system has no solutions")
        if len(params) != len(self.nullspace_basis):
            raise ValueError("wrong number of parameters")
        out = list(self.particular)
        for t, vec in zip(params, self.nullspace_basis):
            for pos, v in enumerate(vec):
                out[pos] = out[pos] + t * v
        return out


def _echelon(matrix: FieldMatrix, rhs, zero_tol: float):
    """Shared Gauss-Jordan sweep; returns (rows, rhs, pivot list, exact)."""
    exact = matrix.is_exact() and not any(isinstance(v, float) for v in rhs or ())
    rows = [list(r) for r in matrix.entries]
    b = list(rhs) if rhs is not None else None
    m, n = matrix.rows, matrix.cols

    def is_zero(v):
        return v == 0 if exact else abs(v) <= zero_tol

    pivots = []  # (row_index, col_index), rows in echelon order
    r = 0
    for c in range(n):
        if r == m:
            break
        if exact:
            pick = next((s for s in range(r, m) if rows[s][c] != 0), None)
        else:
            pick = max(range(r, m), key=lambda s: abs(rows[s][c]))
            if is_zero(rows[pick][c]):
                pick = None
        if pick is None:
            continue
        if pick != r:
            rows[r], rows[pick] = rows[pick], rows[r]
            if b is not None:
                b[r], b[pick] = b[pick], b[r]
        pivot = rows[r][c]
        rows[r] = [v / pivot for v in rows[r]]
        if b is not None:
            b[r] = b[r] / pivot
        for s in range(m):
            if s == r:
                continue
            factor = rows[s][c]
            if is_zero(factor):
                continue
            # skipping exact zeros in the pivot row is a large win on the
            # sparse systems built from structure constants
            rows[s] = [
                vs if vr == 0 else vs - factor * vr
                for vs, vr in zip(rows[s], rows[r])
            ]
            if b is not None:
                b[s] = b[s] - factor * b[r]
        pivots.append((r, c))
        r += 1
    return rows, b, pivots, exact


def row_reduce(matrix: FieldMatrix, rhs, zero_tol: float = DEFAULT_ZERO_TOL) -> SolutionSet:
    """Solve M x = rhs, classifying the solution set completely.

    Inconsistency is a result kind, not an error.  Free columns receive
    generated parameter names C0, C1, ...
    """
    if matrix.rows != len(rhs):
        raise ValueError("rhs length must match row count")
    rows, b, pivots, exact = _echelon(matrix, rhs, zero_tol)

    def is_zero(v):
        return v == 0 if exact else abs(v) <= zero_tol

    rank = len(pivots)
    for s in range(rank, matrix.rows):
        if not is_zero(b[s]):
            return SolutionSet(INCONSISTENT, None, [], [])

    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    particular = [zero] * matrix.cols
    for r, c in pivots:
        particular[c] = b[r]

    pivot_cols = {c for _, c in pivots}
    nullspace = []
    for fc in range(matrix.cols):
        if fc in pivot_cols:
            continue
        vec = [zero] * matrix.cols
        vec[fc] = one
        for r, c in pivots:
            vec[c] = -rows[r][fc]
        nullspace.append(vec)

    names = [f"C{k}" for k in range(len(nullspace))]
    kind = UNIQUE if not nullspace else PARAMETRIC
    return SolutionSet(kind, particular, nullspace, names)


def rank(matrix: FieldMatrix, zero_tol: float = DEFAULT_ZERO_TOL) -> int:
    """Row rank, using the same pivoting rules as row_reduce."""
    _, _, pivots, _ = _echelon(matrix, None, zero_tol)
    return len(pivots)
