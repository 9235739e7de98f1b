"""Elements of A (x) A acting as linear operators on the algebra A.

A tensor f = sum_ij f[i][j] e_i (x) e_j acts on x as sum_ij f[i][j] e_i x e_j.
The dense coefficient matrix f[i][j] is the canonical (standard) form: it is
what equality, composition and inversion work on.  A list of simple pairs
(a, b), when the tensor was built from one, is kept purely for display.
"""

from __future__ import annotations

from .algebra import Algebra, Element, RATIONAL, element_from_json, format_scalar
from .errors import AlgebraMismatch, SingularTensor
from .linalg import DEFAULT_ZERO_TOL, FieldMatrix, INCONSISTENT, row_reduce

#: float-mode tolerance for the two-sided identity check after inversion
IDENTITY_CHECK_TOL = 1e-9


class TensorOp:
    """A linear operator on the algebra in standard (coefficient) form."""

    __slots__ = ("algebra", "coeff", "display_pairs")

    def __init__(self, algebra: Algebra, coeff, display_pairs=None,
                 _validated=False):
        n = algebra.dim
        if _validated:
            coeff = tuple(tuple(row) for row in coeff)
        else:
            coeff = tuple(tuple(algebra.coerce(v) for v in row) for row in coeff)
            if len(coeff) != n or any(len(row) != n for row in coeff):
                raise ValueError("coefficient matrix must be n*n")
        self.algebra = algebra
        self.coeff = coeff
        self.display_pairs = tuple(display_pairs) if display_pairs else None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs) -> "TensorOp":
        """Standard form of sum_s a_s (x) b_s; the pairs are kept for display."""
        pairs = list(pairs)
        if not pairs:
            raise ValueError("need at least one (a, b) pair")
        algebra = pairs[0][0].algebra
        n = algebra.dim
        coeff = [[algebra.scalar_zero()] * n for _ in range(n)]
        for a, b in pairs:
            if a.algebra != algebra or b.algebra != algebra:
                raise AlgebraMismatch("tensor factors from different algebras")
            for i, ai in enumerate(a.coords):
                if ai == 0:
                    continue
                for j, bj in enumerate(b.coords):
                    if bj == 0:
                        continue
                    coeff[i][j] = coeff[i][j] + ai * bj
        return cls(algebra, coeff, display_pairs=pairs, _validated=True)

    @classmethod
    def identity(cls, algebra: Algebra) -> "TensorOp":
        """The unit tensor 1 (x) 1, which acts as the identity map."""
        return cls.from_pairs([(algebra.one(), algebra.one())])

    @classmethod
    def zero(cls, algebra: Algebra) -> "TensorOp":
        n = algebra.dim
        z = algebra.scalar_zero()
        return cls(algebra, [[z] * n for _ in range(n)])

    # -- basic protocol ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, TensorOp)
            and self.algebra == other.algebra
            and self.coeff == other.coeff
        )

    def __hash__(self):
        return hash((self.algebra, self.coeff))

    def __repr__(self):
        return f"TensorOp({self.to_text()})"

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol:
            return all(abs(v) <= tol for row in self.coeff for v in row)
        return all(v == 0 for row in self.coeff for v in row)

    def is_identity(self, tol: float = 0.0) -> bool:
        one = self.algebra.scalar_one()
        for i, row in enumerate(self.coeff):
            for j, v in enumerate(row):
                want = one if i == j == 0 else 0
                if tol:
                    if abs(v - want) > tol:
                        return False
                elif v != want:
                    return False
        return True

    def _same_algebra(self, other):
        if self.algebra != other.algebra:
            raise AlgebraMismatch("tensors over different algebras")

    # -- action, composition, vectorization ------------------------------------

    def apply(self, x: Element) -> Element:
        """Evaluate sum_ij f[i][j] e_i x e_j by explicit triple products."""
        if x.algebra != self.algebra:
            raise AlgebraMismatch("tensor and argument over different algebras")
        alg = self.algebra
        total = alg.zero()
        for i, row in enumerate(self.coeff):
            if all(v == 0 for v in row):
                continue
            left = alg.basis(i) * x
            for j, v in enumerate(row):
                if v == 0:
                    continue
                total = total + v * (left * alg.basis(j))
        return total

    def compose(self, other: "TensorOp") -> "TensorOp":
        """Standard form of the operator x -> self(other(x)).

        The mixed products (e_i e_k) (x) (e_l e_j) contract through the
        structure constants; cost is O(n^4) scalar operations with the sparse
        constant table.
        """
        self._same_algebra(other)
        alg = self.algebra
        n = alg.dim
        table = alg._mul_table
        out = [[alg.scalar_zero()] * n for _ in range(n)]
        for i, frow in enumerate(self.coeff):
            for j, fij in enumerate(frow):
                if fij == 0:
                    continue
                for k, grow in enumerate(other.coeff):
                    left_products = table[i][k]
                    if not left_products:
                        continue
                    for l, gkl in enumerate(grow):
                        if gkl == 0:
                            continue
                        w = fij * gkl
                        for p, c1 in left_products:
                            wc = w if c1 == 1 else -w if c1 == -1 else w * c1
                            for q, c2 in table[l][j]:
                                if c2 == 1:
                                    out[p][q] = out[p][q] + wc
                                elif c2 == -1:
                                    out[p][q] = out[p][q] - wc
                                else:
                                    out[p][q] = out[p][q] + wc * c2
        return TensorOp(alg, out, _validated=True)

    def operator_matrix(self) -> FieldMatrix:
        """Field-level matrix M with M @ coords(x) = coords(self.apply(x)).

        Built as sum_ij f[i][j] L(e_i) @ R(e_j) from the regular
        representations (cached per algebra), independently of apply().
        """
        alg = self.algebra
        n = alg.dim
        pair = alg.pair_products()
        out = [[alg.scalar_zero()] * n for _ in range(n)]
        for i, row in enumerate(self.coeff):
            for j, v in enumerate(row):
                if v == 0:
                    continue
                for q, p, w in pair[i][j]:
                    if w == 1:
                        out[q][p] = out[q][p] + v
                    elif w == -1:
                        out[q][p] = out[q][p] - v
                    else:
                        out[q][p] = out[q][p] + v * w
        return FieldMatrix(out)

    # -- inversion -----------------------------------------------------------------

    def invert(self, zero_tol: float = DEFAULT_ZERO_TOL) -> "TensorOp":
        """The tensor g with self o g = g o self = 1 (x) 1.

        The coefficients of g solve the n^2 linear equations stating that the
        composed tensor is the unit tensor; inconsistency of that system is
        what defines a singular tensor.  Both-sided identity is verified after
        the solve rather than assumed.
        """
        alg = self.algebra
        n = alg.dim
        table = alg._mul_table
        zero = alg.scalar_zero()
        rows = [[zero] * (n * n) for _ in range(n * n)]
        for i, frow in enumerate(self.coeff):
            for j, fij in enumerate(frow):
                if fij == 0:
                    continue
                for k in range(n):
                    for p, c1 in table[i][k]:
                        fc = fij if c1 == 1 else -fij if c1 == -1 else fij * c1
                        for l in range(n):
                            for q, c2 in table[l][j]:
                                row = rows[p * n + q]
                                if c2 == 1:
                                    row[k * n + l] = row[k * n + l] + fc
                                elif c2 == -1:
                                    row[k * n + l] = row[k * n + l] - fc
                                else:
                                    row[k * n + l] = row[k * n + l] + fc * c2
        rhs = [zero] * (n * n)
        rhs[0] = alg.scalar_one()
        sol = row_reduce(FieldMatrix(rows), rhs, zero_tol)
        if sol.kind == INCONSISTENT:
            raise SingularTensor("tensor is singular: no inverse tensor exists")
        g = TensorOp(
            alg,
            [[sol.particular[k * n + l] for l in range(n)] for k in range(n)],
            _validated=True,
        )
        tol = 0.0 if alg.scalar_mode == RATIONAL else IDENTITY_CHECK_TOL
        if not self.compose(g).is_identity(tol) or not g.compose(self).is_identity(tol):
            raise SingularTensor(
                "tensor has only a one-sided inverse; treating it as singular"
            )
        return g

    # -- presentation ---------------------------------------------------------------

    def simple_pairs(self):
        """A list of (a, b) pairs whose tensor sum equals this operator.

        Uses the display pairs when available, otherwise decomposes the
        coefficient matrix row by row as e_i (x) (row_i).
        """
        if self.display_pairs is not None:
            return list(self.display_pairs)
        alg = self.algebra
        pairs = []
        for i, row in enumerate(self.coeff):
            if all(v == 0 for v in row):
                continue
            pairs.append((alg.basis(i), Element(alg, row, _validated=True)))
        return pairs

    def to_text(self) -> str:
        """Canonical rendering like '1/4(i⊗j) + 1/2(k⊗k)'."""
        names = self.algebra.basis_names
        parts = []
        for i, row in enumerate(self.coeff):
            for j, v in enumerate(row):
                if v == 0:
                    continue
                negative = v < 0
                mag = -v if negative else v
                body = f"({names[i]}⊗{names[j]})"
                if mag != 1:
                    body = f"{format_scalar(mag)}{body}"
                if not parts:
                    parts.append(f"-{body}" if negative else body)
                else:
                    parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        if self.algebra.scalar_mode == RATIONAL:
            coeff = [[str(v) for v in row] for row in self.coeff]
        else:
            coeff = [list(row) for row in self.coeff]
        return {"coeff": coeff}

    @classmethod
    def from_json(cls, algebra: Algebra, data) -> "TensorOp":
        """Accepts {"coeff": n*n array} or {"pairs": [[elem, elem], ...]}."""
        if "coeff" in data:
            return cls(algebra, data["coeff"])
        if "pairs" in data:
            pairs = [
                (element_from_json(algebra, a), element_from_json(algebra, b))
                for a, b in data["pairs"]
            ]
            return cls.from_pairs(pairs)
        raise ValueError("tensor JSON needs a 'coeff' or 'pairs' key")


def tensor_from_pairs(pairs) -> TensorOp:
    """Standard representation of sum_s a_s (x) b_s."""
    return TensorOp.from_pairs(pairs)
