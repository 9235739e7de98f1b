"""Solvers for systems  sum_s a_s x^j b_s = c  over an algebra.

Two independent routes are implemented and cross-checked:

* solve_field vectorizes every operator block into its field-level matrix,
  solves one big scalar system, and maps the solution set back to elements.

* solve_richardson right-multiplies every equation by every basis unit,
  obtaining an enlarged algebra-valued linear system in the unknowns
  x^j e_p, and runs Gaussian elimination with left division by pivots.
  A solution of the enlarged system need NOT solve the original equation
  when the operator is singular, so every candidate is verified by
  substitution before it is reported; a failing candidate is returned with
  kind UNVERIFIED_ENLARGED instead of being silently trusted.

Quasideterminants are provided both as a standalone operation and as an
alternative engine for the enlarged solve (a Cramer-style formula); the
elimination engine remains the default and the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra, Element, RATIONAL, element_from_json, element_to_json
from .errors import (
    AlgebraMismatch,
    NotInvertible,
    PivotNotInvertible,
    QuasideterminantUndefined,
)
from .linalg import (
    DEFAULT_ZERO_TOL,
    FieldMatrix,
    INCONSISTENT,
    PARAMETRIC,
    UNIQUE,
    UNVERIFIED_ENLARGED,
    row_reduce,
)
from .tensor import TensorOp

#: float-mode tolerance for accepting a residual as zero
RESIDUAL_TOL = 1e-9


class SylvesterSystem:
    """m_eq equations in m_unk unknowns; ops[i][j] is the operator acting on
    unknown j in equation i, rhs[i] the equation's right-hand element."""

    __slots__ = ("algebra", "m_eq", "m_unk", "ops", "rhs")

    def __init__(self, algebra: Algebra, ops, rhs):
        ops = tuple(tuple(row) for row in ops)
        rhs = tuple(rhs)
        if not ops or not ops[0]:
            raise ValueError("need at least one equation and one unknown")
        m_unk = len(ops[0])
        if any(len(row) != m_unk for row in ops):
            raise ValueError("ragged operator grid")
        if len(rhs) != len(ops):
            raise ValueError("one right-hand side per equation")
        for row in ops:
            for op in row:
                if op.algebra != algebra:
                    raise AlgebraMismatch("operator from a different algebra")
        for b in rhs:
            if b.algebra != algebra:
                raise AlgebraMismatch("right-hand side from a different algebra")
        self.algebra = algebra
        self.m_eq = len(ops)
        self.m_unk = m_unk
        self.ops = ops
        self.rhs = rhs

    @classmethod
    def from_terms(cls, algebra: Algebra, equations, m_unk: int) -> "SylvesterSystem":
        """equations: list of (terms, rhs) with terms = [(left, right, var), ...]."""
        ops = []
        for terms, _rhs in equations:
            for _a, _b, var in terms:
                if not 0 <= var < m_unk:
                    raise ValueError(
                        f"term references unknown {var}, system has {m_unk}"
                    )
            row = []
            for j in range(m_unk):
                pairs = [(a, b) for a, b, var in terms if var == j]
                row.append(TensorOp.from_pairs(pairs) if pairs
                           else TensorOp.zero(algebra))
            ops.append(row)
        return cls(algebra, ops, [rhs for _terms, rhs in equations])

    def apply_ops(self, xs) -> list:
        """The left-hand sides evaluated at xs (no right-hand side involved)."""
        if len(xs) != self.m_unk:
            raise ValueError("one value per unknown expected")
        out = []
        for row in self.ops:
            total = self.algebra.zero()
            for op, x in zip(row, xs):
                total = total + op.apply(x)
            out.append(total)
        return out

    def residuals(self, xs) -> list:
        """Per-equation lhs(xs) - rhs, recomputed from scratch."""
        return [v - b for v, b in zip(self.apply_ops(xs), self.rhs)]

    def to_json(self) -> dict:
        equations = []
        for row, b in zip(self.ops, self.rhs):
            terms = []
            for j, op in enumerate(row):
                for a, c in op.simple_pairs():
                    terms.append({
                        "left": element_to_json(a),
                        "right": element_to_json(c),
                        "var": j,
                    })
            equations.append({"terms": terms, "rhs": element_to_json(b)})
        return {"unknowns": self.m_unk, "equations": equations}

    @classmethod
    def from_json(cls, algebra: Algebra, data) -> "SylvesterSystem":
        m_unk = data["unknowns"]
        equations = []
        for eq in data["equations"]:
            terms = [
                (
                    element_from_json(algebra, t["left"]),
                    element_from_json(algebra, t["right"]),
                    t["var"],
                )
                for t in eq["terms"]
            ]
            equations.append((terms, element_from_json(algebra, eq["rhs"])))
        return cls.from_terms(algebra, equations, m_unk)


@dataclass
class RichardsonSystem:
    """The enlarged algebra-valued system.

    Row (i, l) is equation i of the original system right-multiplied by basis
    unit e_l; column (j, p) carries the unknown x^j e_p.  Rows and columns are
    stored blocked, index = outer * dim + inner.
    """

    algebra: Algebra
    m_eq: int
    m_unk: int
    amat: list        # (m_eq*n) x (m_unk*n) matrix of Elements
    brhs: list        # m_eq*n Elements, entry (i, l) = rhs[i] * e_l


@dataclass
class NCSolutionSet:
    """Solutions of an algebra-valued linear system M x = b (coefficients on
    the left of the unknowns).

    When consistent, the full set is particular + sum_k nullspace[k] * c_k
    where each free constant c_k ranges over the whole algebra and multiplies
    its direction vector entrywise FROM THE RIGHT.
    """

    kind: str
    particular: list | None
    nullspace: list
    free_names: list


@dataclass
class AlgebraSolution:
    """Result of a system solve, mapped back to algebra elements.

    For kinds UNIQUE and PARAMETRIC, x is a verified solution and the family
    x + sum_k t_k * nullspace[k] (scalar parameters t_k) consists of verified
    solutions.  UNVERIFIED_ENLARGED means the enlarged system produced the
    candidate x but substitution into the original system left the recorded
    residuals; this happens exactly when the operator is singular and the
    enlarged solution does not project onto a true solution.
    """

    kind: str
    x: list | None
    nullspace: list
    free_names: list
    residuals: list | None

    def assignment(self, params) -> list:
        if self.x is None:
            raise ValueError("no solution to evaluate")
        if len(params) != len(self.nullspace):
            raise ValueError("wrong number of parameters")
        out = list(self.x)
        for t, direction in zip(params, self.nullspace):
            out = [xv + t * dv for xv, dv in zip(out, direction)]
        return out


def _residuals_vanish(residuals, mode, tol) -> bool:
    if mode == RATIONAL:
        return all(r.is_zero() for r in residuals)
    return all(r.is_zero(tol) for r in residuals)


# ---------------------------------------------------------------------------
# field-level route
# ---------------------------------------------------------------------------


def solve_field(system: SylvesterSystem,
                zero_tol: float = DEFAULT_ZERO_TOL) -> AlgebraSolution:
    """Vectorize the whole system over the scalar field and classify fully.

    Stacks the operator matrix of every block into an (n*m_eq) x (n*m_unk)
    scalar system, solves it, and maps the scalar solution set back to
    elements.  Every particular solution is verified by substitution.
    """
    alg = system.algebra
    n = alg.dim
    blocks = [[op.operator_matrix() for op in row] for row in system.ops]
    big = []
    for i in range(system.m_eq):
        for r in range(n):
            stacked = []
            for j in range(system.m_unk):
                stacked.extend(blocks[i][j].entries[r])
            big.append(stacked)
    rhs = []
    for b in system.rhs:
        rhs.extend(b.coords)

    sol = row_reduce(FieldMatrix(big), rhs, zero_tol)
    if sol.kind == INCONSISTENT:
        return AlgebraSolution(INCONSISTENT, None, [], [], None)

    def chunks(vector):
        return [
            Element(alg, vector[j * n:(j + 1) * n], _validated=True)
            for j in range(system.m_unk)
        ]

    xs = chunks(sol.particular)
    nullspace = [tuple(chunks(vec)) for vec in sol.nullspace_basis]
    residuals = system.residuals(xs)
    return AlgebraSolution(sol.kind, xs, nullspace, list(sol.free_names), residuals)


# ---------------------------------------------------------------------------
# enlarged-system route
# ---------------------------------------------------------------------------


def build_richardson(system: SylvesterSystem) -> RichardsonSystem:
    """Right-multiply every equation by every basis unit.

    For equation i and unknown j, the operator's standard coefficients give
    the elements a^{ik} = sum_u f[u][k] e_u, so that the equation reads
    sum_{j,k} a^{ik} (x^j e_k) = b^i.  Multiplying by e_l on the right and
    expanding e_k e_l through the structure constants yields the coefficient
    of the unknown x^j e_p in row (i, l):  sum_k C[k][l][p] a^{ik}.
    """
    alg = system.algebra
    n = alg.dim
    table = alg._mul_table
    amat = []
    brhs = []
    for i in range(system.m_eq):
        # a_ik[j][k]: column k of the operator's coefficient matrix
        a_ik = [
            [
                Element(alg, [op.coeff[u][k] for u in range(n)], _validated=True)
                for k in range(n)
            ]
            for op in system.ops[i]
        ]
        for l in range(n):
            row = []
            for j in range(system.m_unk):
                cols = [alg.zero() for _ in range(n)]
                for k in range(n):
                    a = a_ik[j][k]
                    if a.is_zero():
                        continue
                    for p, c in table[k][l]:
                        if c == 1:
                            cols[p] = cols[p] + a
                        elif c == -1:
                            cols[p] = cols[p] - a
                        else:
                            cols[p] = cols[p] + a.scale(c)
                row.extend(cols)
            amat.append(row)
            brhs.append(system.rhs[i] * alg.basis(l))
    return RichardsonSystem(alg, system.m_eq, system.m_unk, amat, brhs)


def _element_zero(e: Element, exact: bool, tol: float) -> bool:
    return e.is_zero() if exact else e.is_zero(tol)


def nc_row_reduce(amat, brhs, zero_tol: float = DEFAULT_ZERO_TOL) -> NCSolutionSet:
    """Gauss-Jordan elimination over the algebra, dividing rows on the left
    by their pivots.

    Coefficients multiply the unknowns from the left, so scaling an equation
    means left-multiplying the whole row by the pivot's inverse.  In exact
    mode the pivot is the first invertible entry scanning down the column; in
    float mode the largest-norm entry.  A column whose nonzero entries are all
    non-invertible raises PivotNotInvertible (only possible outside division
    algebras).
    """
    rows = [list(r) for r in amat]
    rhs = list(brhs)
    if not rows:
        raise ValueError("empty system")
    alg = rhs[0].algebra
    exact = alg.scalar_mode == RATIONAL
    m, cols = len(rows), len(rows[0])

    def zero(e):
        return _element_zero(e, exact, zero_tol)

    pivots = []
    r = 0
    for c in range(cols):
        if r == m:
            break
        pick = None
        saw_noninvertible = False
        candidates = range(r, m)
        if not exact:
            candidates = sorted(candidates, key=lambda s: -rows[s][c].norm())
        for s in candidates:
            entry = rows[s][c]
            if zero(entry):
                continue
            try:
                pick = (s, entry.inverse())
                break
            except NotInvertible:
                saw_noninvertible = True
        if pick is None:
            if saw_noninvertible:
                raise PivotNotInvertible(
                    f"column {c}: nonzero entries exist but none is invertible"
                )
            continue
        s, inv = pick
        if s != r:
            rows[r], rows[s] = rows[s], rows[r]
            rhs[r], rhs[s] = rhs[s], rhs[r]
        rows[r] = [inv * e for e in rows[r]]
        rhs[r] = inv * rhs[r]
        for t in range(m):
            if t == r:
                continue
            factor = rows[t][c]
            if zero(factor):
                continue
            rows[t] = [et - factor * er for et, er in zip(rows[t], rows[r])]
            rhs[t] = rhs[t] - factor * rhs[r]
        pivots.append((r, c))
        r += 1

    for s in range(len(pivots), m):
        if not zero(rhs[s]):
            return NCSolutionSet(INCONSISTENT, None, [], [])

    particular = [alg.zero()] * cols
    for t, pc in pivots:
        particular[pc] = rhs[t]
    pivot_cols = {pc for _, pc in pivots}
    nullspace = []
    for fc in range(cols):
        if fc in pivot_cols:
            continue
        vec = [alg.zero()] * cols
        vec[fc] = alg.one()
        for t, pc in pivots:
            vec[pc] = -rows[t][fc]
        nullspace.append(vec)
    names = [f"C{k}" for k in range(len(nullspace))]
    kind = UNIQUE if not nullspace else PARAMETRIC
    return NCSolutionSet(kind, particular, nullspace, names)


def _nc_reduce_transposed(amat, brhs, zero_tol: float = DEFAULT_ZERO_TOL) -> NCSolutionSet:
    """The same elimination driven over the transposed storage layout.

    The single-equation case can be written with the coefficient matrix
    transposed and the unknowns laid out as a row; the mathematics is
    unchanged, but the traversal order differs, which makes this a useful
    second path.  Equations live in the columns of `cmat`.
    """
    cmat = [list(col) for col in zip(*amat)]   # cmat[u][e]
    rhs = list(brhs)
    alg = rhs[0].algebra
    exact = alg.scalar_mode == RATIONAL
    n_unknowns = len(cmat)
    m = len(rhs)

    def zero(e):
        return _element_zero(e, exact, zero_tol)

    used = set()
    pivots = []  # (equation, unknown)
    for u in range(n_unknowns):
        pick = None
        saw_noninvertible = False
        candidates = [e for e in range(m) if e not in used]
        if not exact:
            candidates.sort(key=lambda e: -cmat[u][e].norm())
        for e in candidates:
            entry = cmat[u][e]
            if zero(entry):
                continue
            try:
                pick = (e, entry.inverse())
                break
            except NotInvertible:
                saw_noninvertible = True
        if pick is None:
            if saw_noninvertible:
                raise PivotNotInvertible(
                    f"unknown {u}: nonzero coefficients exist but none is invertible"
                )
            continue
        e, inv = pick
        for u2 in range(n_unknowns):
            cmat[u2][e] = inv * cmat[u2][e]
        rhs[e] = inv * rhs[e]
        for e2 in range(m):
            if e2 == e:
                continue
            factor = cmat[u][e2]
            if zero(factor):
                continue
            for u2 in range(n_unknowns):
                cmat[u2][e2] = cmat[u2][e2] - factor * cmat[u2][e]
            rhs[e2] = rhs[e2] - factor * rhs[e]
        used.add(e)
        pivots.append((e, u))

    for e in range(m):
        if e in used:
            continue
        if not zero(rhs[e]):
            return NCSolutionSet(INCONSISTENT, None, [], [])

    particular = [alg.zero()] * n_unknowns
    for e, u in pivots:
        particular[u] = rhs[e]
    pivot_unknowns = {u for _, u in pivots}
    nullspace = []
    for fu in range(n_unknowns):
        if fu in pivot_unknowns:
            continue
        vec = [alg.zero()] * n_unknowns
        vec[fu] = alg.one()
        for e, u in pivots:
            vec[u] = -cmat[fu][e]
        nullspace.append(vec)
    names = [f"C{k}" for k in range(len(nullspace))]
    kind = UNIQUE if not nullspace else PARAMETRIC
    return NCSolutionSet(kind, particular, nullspace, names)


# ---------------------------------------------------------------------------
# quasideterminants
# ---------------------------------------------------------------------------


class _QuasiContext:
    """Memoized recursive quasideterminants over row/column index subsets."""

    def __init__(self, mat):
        self.mat = mat
        self.memo = {}

    def qd(self, rows: tuple, cols: tuple, ri: int, cj: int) -> Element:
        key = (rows, cols, ri, cj)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            value = self.mat[ri][cj]
        else:
            sub_rows = tuple(r for r in rows if r != ri)
            sub_cols = tuple(c for c in cols if c != cj)
            # inverse of the complementary minor, entrywise:
            # inv[(c, r)] = (qd of the minor at (r, c)) ** -1
            inv = {}
            for r in sub_rows:
                for c in sub_cols:
                    q = self.qd(sub_rows, sub_cols, r, c)
                    try:
                        inv[(c, r)] = q.inverse()
                    except NotInvertible as exc:
                        raise QuasideterminantUndefined(
                            f"minor quasideterminant at ({r}, {c}) is not invertible"
                        ) from exc
            value = self.mat[ri][cj]
            for c in sub_cols:
                left = self.mat[ri][c]
                if left.is_zero():
                    continue
                for r in sub_rows:
                    value = value - left * inv[(c, r)] * self.mat[r][cj]
        self.memo[key] = value
        return value


def quasideterminant(mat, i: int, j: int) -> Element:
    """The (i, j) quasideterminant of a square matrix over the algebra.

    Defined recursively: the (i, j) entry minus (row i without column j)
    times the entrywise-inverted complementary minor times (column j without
    row i).  For commuting entries this equals det(M) / det(minor).  Raises
    QuasideterminantUndefined when the recursion needs the inverse of a
    singular quasideterminant.
    """
    size = len(mat)
    if any(len(row) != size for row in mat):
        raise ValueError("quasideterminant needs a square matrix")
    if not (0 <= i < size and 0 <= j < size):
        raise ValueError("index out of range")
    ctx = _QuasiContext(mat)
    return ctx.qd(tuple(range(size)), tuple(range(size)), i, j)


def _candidate_by_quasideterminants(rich: RichardsonSystem):
    """Cramer-style candidate: x^j = sum_r (qd at (r, col(j,0)))^-1 * b_r.

    Presumes an invertible (square) enlarged matrix; returns None when the
    matrix is rectangular or some needed quasideterminant is undefined or
    singular, letting the caller fall back to elimination.
    """
    size = len(rich.amat)
    if size != len(rich.amat[0]):
        return None
    n = rich.algebra.dim
    ctx = _QuasiContext(rich.amat)
    rows = tuple(range(size))
    cols = tuple(range(size))
    xs = []
    try:
        for j in range(rich.m_unk):
            target = j * n  # the x^j e_0 column
            total = rich.algebra.zero()
            for r in rows:
                q = ctx.qd(rows, cols, r, target)
                total = total + q.inverse() * rich.brhs[r]
            xs.append(total)
    except (QuasideterminantUndefined, NotInvertible):
        return None
    return xs


# ---------------------------------------------------------------------------
# the enlarged-system solver
# ---------------------------------------------------------------------------


def _independent_directions(directions, alg: Algebra, zero_tol: float):
    """Greedy scalar-level filter keeping a maximal independent subset."""
    exact = alg.scalar_mode == RATIONAL
    kept = []
    basis_rows = []

    def reduce(vec):
        v = list(vec)
        for row in basis_rows:
            lead = row["lead"]
            factor = v[lead] / row["vec"][lead]
            if (factor == 0) if exact else (abs(factor) <= zero_tol):
                continue
            v = [a - factor * b for a, b in zip(v, row["vec"])]
        return v

    for d in directions:
        flat = [c for elem in d for c in elem.coords]
        v = reduce(flat)
        lead = next(
            (t for t, val in enumerate(v)
             if (val != 0 if exact else abs(val) > zero_tol)),
            None,
        )
        if lead is None:
            continue
        basis_rows.append({"vec": v, "lead": lead})
        kept.append(d)
    return kept


def solve_richardson(system: SylvesterSystem, *, convention: str = "column",
                     engine: str = "elimination",
                     zero_tol: float = DEFAULT_ZERO_TOL,
                     residual_tol: float = RESIDUAL_TOL) -> AlgebraSolution:
    """Solve through the enlarged algebra-valued system.

    The enlarged unknowns x^j e_p are treated as independent during
    elimination (that is the method); only extraction uses p = 0.  The
    extracted candidate is ALWAYS verified by substitution into the original
    system: a failing candidate comes back as UNVERIFIED_ENLARGED together
    with its residuals.

    convention selects the storage layout of the enlarged system ("column"
    eliminates rows, "row" works on the transposed layout); both must and do
    produce the same solutions.  engine="quasideterminant" tries the
    Cramer-style formula first and falls back to elimination whenever it is
    not applicable or its candidate fails verification.
    """
    if convention not in ("column", "row"):
        raise ValueError(f"unknown convention {convention!r}")
    if engine not in ("elimination", "quasideterminant"):
        raise ValueError(f"unknown engine {engine!r}")

    alg = system.algebra
    n = alg.dim
    rich = build_richardson(system)

    if engine == "quasideterminant":
        xs = _candidate_by_quasideterminants(rich)
        if xs is not None:
            residuals = system.residuals(xs)
            if _residuals_vanish(residuals, alg.scalar_mode, residual_tol):
                # the Cramer formula presupposes an invertible enlarged
                # matrix, under which the solution is unique
                return AlgebraSolution(UNIQUE, xs, [], [], residuals)
        # not applicable or not verified: the elimination engine decides

    if convention == "column":
        enlarged = nc_row_reduce(rich.amat, rich.brhs, zero_tol)
    else:
        enlarged = _nc_reduce_transposed(rich.amat, rich.brhs, zero_tol)

    if enlarged.kind == INCONSISTENT:
        # any true solution would embed into the enlarged system, so an
        # inconsistent enlargement rules the original out as well
        return AlgebraSolution(INCONSISTENT, None, [], [], None)

    xs = [enlarged.particular[j * n] for j in range(system.m_unk)]
    residuals = system.residuals(xs)
    if not _residuals_vanish(residuals, alg.scalar_mode, residual_tol):
        return AlgebraSolution(UNVERIFIED_ENLARGED, xs, [], [], residuals)

    extracted = [
        [vec[j * n] for j in range(system.m_unk)]
        for vec in enlarged.nullspace
    ]
    exact = alg.scalar_mode == RATIONAL
    nonzero = [
        d for d in extracted
        if not all(_element_zero(e, exact, zero_tol) for e in d)
    ]
    if not nonzero:
        # every other enlarged solution projects onto the same candidate,
        # so the original solution is unique
        return AlgebraSolution(UNIQUE, xs, [], [], residuals)

    kernel_dirs = [
        d for d in nonzero
        if _residuals_vanish(system.apply_ops(d), alg.scalar_mode, residual_tol)
    ]
    independent = _independent_directions(kernel_dirs, alg, zero_tol)
    names = [f"C{k}" for k in range(len(independent))]
    return AlgebraSolution(
        PARAMETRIC, xs, [tuple(d) for d in independent], names, residuals
    )
