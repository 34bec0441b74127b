"""Exact rational dense linear algebra.

Matrices are immutable tuples of tuples of ``fractions.Fraction``.  Subspaces
are stored by a canonical reduced-row-echelon basis, so two subspaces are
equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, str, Fraction]


def frac(x: Scalar) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable[Scalar]) -> tuple[Fraction, ...]:
    return tuple(frac(x) for x in entries)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> "Matrix":
        data = tuple(vec(r) for r in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return Matrix(len(data), ncols, data)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix.from_rows(
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix.from_rows([[Fraction(0)] * cols for _ in range(rows)], cols)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.rows,
        )

    def matvec(self, x: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        xs = vec(x)
        return tuple(sum((r[j] * xs[j] for j in range(self.cols)), Fraction(0)) for r in self.entries)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return Matrix.from_rows(
            [
                [
                    sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ],
            other.cols,
        )

    def rank(self) -> int:
        return len(rref(self)[1])


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot column list.  Row space preserved."""
    rows = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pivot_row = next((i for i in range(r, m.rows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Matrix.from_rows(rows, m.cols), pivots


def kernel(m: Matrix) -> "Subspace":
    """Canonical basis of the right kernel {x : m x = 0}."""
    R, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R.entries[i][fc]
        basis.append(v)
    return Subspace.from_vectors(m.cols, basis)


def solve(m: Matrix, b: Sequence[Scalar]):
    """One solution of m x = b (the RREF particular solution) or None."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    aug = Matrix.from_rows(
        [list(m.entries[i]) + [frac(b[i])] for i in range(m.rows)], m.cols + 1
    )
    R, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = R.entries[i][m.cols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n in canonical form: RREF basis, one vector per row."""

    ambient_dim: int
    basis: Matrix

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Sequence[Sequence[Scalar]]) -> "Subspace":
        m = Matrix.from_rows([vec(v) for v in vectors], ambient_dim)
        R, pivots = rref(m)
        rows = R.entries[: len(pivots)]
        return Subspace(ambient_dim, Matrix.from_rows(rows, ambient_dim))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace.from_vectors(ambient_dim, [])

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace.from_vectors(ambient_dim, Matrix.identity(ambient_dim).entries)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.basis.entries

    def contains(self, v: Sequence[Scalar]) -> bool:
        if self.dim == 0:
            return all(frac(x) == 0 for x in v)
        return solve(self.basis.transpose(), v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        return Subspace.from_vectors(
            self.ambient_dim, list(self.vectors()) + list(other.vectors())
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        # x in A cap B  <=>  x = sum a_i u_i = sum b_j w_j: kernel of [U^T | -W^T]
        n = self.ambient_dim
        da, db = self.dim, other.dim
        if da == 0 or db == 0:
            return Subspace.zero(n)
        rows = []
        for i in range(n):
            rows.append(
                [self.basis.entries[k][i] for k in range(da)]
                + [-other.basis.entries[k][i] for k in range(db)]
            )
        ker = kernel(Matrix.from_rows(rows, da + db))
        vecs = []
        for kv in ker.vectors():
            x = [
                sum((kv[k] * self.basis.entries[k][i] for k in range(da)), Fraction(0))
                for i in range(n)
            ]
            vecs.append(x)
        return Subspace.from_vectors(n, vecs)


def grassmann_ok(a: Subspace, b: Subspace) -> bool:
    return a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[format_fraction(x) for x in row] for row in m.entries]
